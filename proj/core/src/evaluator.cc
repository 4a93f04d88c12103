// Copyright 2026 The GuiNav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "guinav/evaluator.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace guinav::eval {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<VerdictReason, std::string_view>, 10>
    kReasonNames{{
        {VerdictReason::kTypeMismatch, "type_mismatch"},
        {VerdictReason::kDistancePass, "distance_pass"},
        {VerdictReason::kDistanceFail, "distance_fail"},
        {VerdictReason::kSameBBoxPass, "same_bbox_pass"},
        {VerdictReason::kScrollDirPass, "scroll_dir_pass"},
        {VerdictReason::kScrollDirFail, "scroll_dir_fail"},
        {VerdictReason::kTextPass, "text_pass"},
        {VerdictReason::kTextFail, "text_fail"},
        {VerdictReason::kStatusPass, "status_pass"},
        {VerdictReason::kParseFailure, "parse_failure"},
    }};

std::string NormalizeText(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(first, last - first + 1));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

bool SameFamily(ActionKind a, ActionKind b) { return a == b; }

std::string_view CategoryColumn(Category c) {
  switch (c) {
    case Category::kGeneral: return "General";
    case Category::kInstall: return "Install";
    case Category::kGoogleApps: return "GoogleApps";
    case Category::kSingle: return "Single";
    case Category::kWebShopping: return "WebShopping";
    case Category::kIos: return "iOS";
    case Category::kCustom: return "Custom";
  }
  return "Custom";
}

std::vector<Category> TableColumns(const std::map<std::string, ScoreReport>& rows) {
  std::vector<Category> cols(std::begin(kAitwCategories), std::end(kAitwCategories));
  for (Category extra : {Category::kIos, Category::kCustom}) {
    for (const auto& [name, report] : rows) {
      if (report.per_category.contains(extra)) {
        cols.push_back(extra);
        break;
      }
    }
  }
  return cols;
}

std::string Fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::vector<std::size_t> ElementsContaining(std::span<const UIElement> elements,
                                            const Point& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (PointInBBox(p, elements[i].bbox)) out.push_back(i);
  }
  return out;
}

double AxisGap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::max(a0, b0) - std::min(a1, b1));
}

bool Touching(const BBox& a, const BBox& b) {
  return AxisGap(a.x, a.x + a.w, b.x, b.x + b.w) <= kAdjacencyGap &&
         AxisGap(a.y, a.y + a.h, b.y, b.y + b.h) <= kAdjacencyGap;
}

bool IsTap(const Action& a, const MatchRule& rule) {
  return a.kind == ActionKind::kDualPoint && a.touch && a.lift &&
         ClassifyGesture(a, rule.tap_threshold) == GestureClass::kTap;
}

}  // namespace

std::string_view ToString(VerdictReason r) {
  for (const auto& [value, name] : kReasonNames) {
    if (value == r) return name;
  }
  return "parse_failure";
}

std::optional<VerdictReason> ParseVerdictReason(std::string_view name) {
  for (const auto& [value, text] : kReasonNames) {
    if (text == name) return value;
  }
  return std::nullopt;
}

StepVerdict MatchStep(const Prediction& pred, const Action& gold,
                      std::span<const UIElement> gold_elements,
                      const MatchRule& rule) {
  if (!pred || !pred->IsValid()) return {false, VerdictReason::kParseFailure};
  if (!SameFamily(pred->kind, gold.kind)) return {false, VerdictReason::kTypeMismatch};

  switch (gold.kind) {
    case ActionKind::kDualPoint: {
      const GestureClass p = ClassifyGesture(*pred, rule.tap_threshold);
      const GestureClass g = ClassifyGesture(gold, rule.tap_threshold);
      if (IsScroll(p) != IsScroll(g)) return {false, VerdictReason::kTypeMismatch};
      if (IsScroll(g)) {
        return p == g ? StepVerdict{true, VerdictReason::kScrollDirPass}
                      : StepVerdict{false, VerdictReason::kScrollDirFail};
      }
      if (Distance(*pred->touch, *gold.touch) <=
          rule.click_distance_threshold + kDistanceEpsilon) {
        return {true, VerdictReason::kDistancePass};
      }
      for (const UIElement& e : gold_elements) {
        if (PointInBBox(*pred->touch, e.bbox) && PointInBBox(*gold.touch, e.bbox)) {
          return {true, VerdictReason::kSameBBoxPass};
        }
      }
      return {false, VerdictReason::kDistanceFail};
    }
    case ActionKind::kTypeText:
      return NormalizeText(pred->text.value_or("")) == NormalizeText(gold.text.value_or(""))
                 ? StepVerdict{true, VerdictReason::kTextPass}
                 : StepVerdict{false, VerdictReason::kTextFail};
    default:
      return {true, VerdictReason::kStatusPass};
  }
}

EpisodeResult ScoreEpisodeDetailed(std::span<const Prediction> preds,
                                   const Episode& episode,
                                   const MatchRule& rule) {
  EpisodeResult result;
  result.episode_id = episode.episode_id;
  result.category = episode.category;
  for (std::size_t i = 0; i < episode.steps.size(); ++i) {
    const Step& step = episode.steps[i];
    const Prediction pred = i < preds.size() ? preds[i] : std::nullopt;
    StepVerdict v = MatchStep(pred, step.gold_action, step.elements, rule);
    result.correct += v.correct ? 1 : 0;
    result.verdicts.push_back(v);
  }
  result.fraction = episode.steps.empty()
                        ? 0.0
                        : static_cast<double>(result.correct) /
                              static_cast<double>(episode.steps.size());
  return result;
}

double ScoreEpisode(std::span<const Prediction> preds, const Episode& episode,
                    const MatchRule& rule) {
  return ScoreEpisodeDetailed(preds, episode, rule).fraction;
}

ScoreReport AggregateCategoryScores(const std::map<Category, double>& category_scores) {
  if (category_scores.empty()) {
    throw ContractViolation("aggregate needs at least one category");
  }
  ScoreReport report;
  report.per_category = category_scores;
  double sum = 0.0;
  for (const auto& [category, score] : category_scores) sum += score;
  report.overall = sum / static_cast<double>(category_scores.size());
  return report;
}

ScoreReport Aggregate(std::span<const EpisodeResult> results) {
  if (results.empty()) throw ContractViolation("aggregate needs at least one episode");
  std::map<Category, std::vector<double>> by_category;
  for (const EpisodeResult& r : results) by_category[r.category].push_back(r.fraction);
  std::map<Category, double> scores;
  for (const auto& [category, fractions] : by_category) {
    const double sum = std::accumulate(fractions.begin(), fractions.end(), 0.0);
    scores[category] = 100.0 * sum / static_cast<double>(fractions.size());
  }
  ScoreReport report = AggregateCategoryScores(scores);
  for (const EpisodeResult& r : results) {
    report.per_episode[r.episode_id] = r.fraction;
    ++report.episodes_per_category[r.category];
    ++report.episodes;
    report.steps += static_cast<int>(r.verdicts.size());
    report.correct_steps += r.correct;
  }
  return report;
}

json ToJson(const ScoreReport& report) {
  json per_category = json::object();
  for (const auto& [c, v] : report.per_category) per_category[std::string(ToString(c))] = v;
  json episodes_per_category = json::object();
  for (const auto& [c, n] : report.episodes_per_category) {
    episodes_per_category[std::string(ToString(c))] = n;
  }
  return {{"per_episode", report.per_episode},
          {"per_category", per_category},
          {"overall", report.overall},
          {"counts",
           {{"episodes", report.episodes},
            {"steps", report.steps},
            {"correct_steps", report.correct_steps},
            {"episodes_per_category", episodes_per_category}}}};
}

std::string MarkdownTable(const std::map<std::string, ScoreReport>& rows) {
  const std::vector<Category> cols = TableColumns(rows);
  std::ostringstream out;
  out << "| Model | Overall |";
  for (Category c : cols) out << ' ' << CategoryColumn(c) << " |";
  out << "\n|---|---:|";
  for (std::size_t i = 0; i < cols.size(); ++i) out << "---:|";
  out << '\n';
  for (const auto& [name, report] : rows) {
    out << "| " << name << " | " << Fixed2(report.overall) << " |";
    for (Category c : cols) {
      auto it = report.per_category.find(c);
      out << ' ' << (it == report.per_category.end() ? "-" : Fixed2(it->second)) << " |";
    }
    out << '\n';
  }
  return out.str();
}

std::string CsvTable(const std::map<std::string, ScoreReport>& rows) {
  const std::vector<Category> cols = TableColumns(rows);
  std::ostringstream out;
  out << "model,overall";
  for (Category c : cols) out << ',' << CategoryColumn(c);
  out << '\n';
  for (const auto& [name, report] : rows) {
    out << name << ',' << Fixed2(report.overall);
    for (Category c : cols) {
      auto it = report.per_category.find(c);
      out << ',' << (it == report.per_category.end() ? "" : Fixed2(it->second));
    }
    out << '\n';
  }
  return out.str();
}

double RoundTo(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

std::map<std::string, Judgment> LatestJudgments(std::span<const Judgment> judgments) {
  std::map<std::string, Judgment> latest;
  for (const Judgment& j : judgments) {
    auto it = latest.find(j.sample_id);
    if (it == latest.end() || j.timestamp_ms >= it->second.timestamp_ms) {
      latest[j.sample_id] = j;
    }
  }
  return latest;
}

HumanAccuracy ComputeHumanAccuracy(std::span<const Judgment> judgments) {
  if (judgments.empty()) throw ContractViolation("no judgments to score");
  for (const Judgment& j : judgments) {
    if (j.score != 0 && j.score != 1) {
      throw ContractViolation("judgment score must be 0 or 1, got " +
                              std::to_string(j.score));
    }
  }
  const auto latest = LatestJudgments(judgments);
  HumanAccuracy acc;
  acc.judged = static_cast<int>(latest.size());
  for (const auto& [id, j] : latest) acc.correct += j.score;
  acc.fraction = static_cast<double>(acc.correct) / acc.judged;
  acc.percent = 100.0 * acc.fraction;
  acc.display_percent = RoundTo(acc.percent, 1);
  return acc;
}

std::string_view ToString(ReviewBucket b) {
  switch (b) {
    case ReviewBucket::kSameTargetCandidate: return "same_target_candidate";
    case ReviewBucket::kOverSegmentationCandidate: return "over_segmentation_candidate";
    case ReviewBucket::kAlternativeActionCandidate: return "alternative_action_candidate";
  }
  return "same_target_candidate";
}

TriageReport Triage(std::span<const ScoredStep> steps, const MatchRule& rule) {
  TriageReport report;
  for (const ScoredStep& s : steps) {
    if (s.verdict.correct) continue;
    ++report.incorrect_by_reason[s.verdict.reason];
    if (!s.pred) continue;

    if (s.verdict.reason == VerdictReason::kTypeMismatch) {
      report.review[ReviewBucket::kAlternativeActionCandidate].push_back(
          {s.episode_id, s.step,
           "predicted " + std::string(ToString(s.pred->kind)) + ", gold " +
               std::string(ToString(s.gold.kind))});
      continue;
    }
    if (s.verdict.reason != VerdictReason::kDistanceFail || !IsTap(*s.pred, rule) ||
        !IsTap(s.gold, rule)) {
      continue;
    }
    const auto pred_hits = ElementsContaining(s.gold_elements, *s.pred->touch);
    const auto gold_hits = ElementsContaining(s.gold_elements, *s.gold.touch);
    std::optional<ReviewBucket> bucket;
    std::string detail;
    for (std::size_t p : pred_hits) {
      for (std::size_t g : gold_hits) {
        if (p == g) continue;
        const UIElement& pe = s.gold_elements[p];
        const UIElement& ge = s.gold_elements[g];
        if (NormalizeText(pe.Content()) == NormalizeText(ge.Content())) {
          bucket = ReviewBucket::kSameTargetCandidate;
          detail = "elements " + std::to_string(p) + " and " + std::to_string(g) +
                   " share content \"" + ge.Content() + "\"";
          break;
        }
        if (!bucket && Touching(pe.bbox, ge.bbox)) {
          bucket = ReviewBucket::kOverSegmentationCandidate;
          detail = "adjacent elements " + std::to_string(p) + " and " + std::to_string(g);
        }
      }
      if (bucket == ReviewBucket::kSameTargetCandidate) break;
    }
    if (bucket) report.review[*bucket].push_back({s.episode_id, s.step, detail});
  }
  return report;
}

json ToJson(const TriageReport& report) {
  json reasons = json::object();
  for (const auto& [r, n] : report.incorrect_by_reason) reasons[std::string(ToString(r))] = n;
  json review = json::object();
  for (const auto& [bucket, refs] : report.review) {
    json list = json::array();
    for (const StepRef& ref : refs) {
      list.push_back({{"episode_id", ref.episode_id}, {"step", ref.step}, {"detail", ref.detail}});
    }
    review[std::string(ToString(bucket))] = list;
  }
  return {{"incorrect_by_reason", reasons}, {"review", review}};
}

}  // namespace guinav::eval
