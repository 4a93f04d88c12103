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
#ifndef GUINAV_EVALUATOR_H_
#define GUINAV_EVALUATOR_H_

// Screen-wise partial action matching: a step is correct when the predicted
// action type and gesture match the gold action. Episode score is the
// fraction of correct steps; category scores average episodes; the overall
// score is the unweighted mean of category scores.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "guinav/errors.h"
#include "guinav/model.h"

namespace guinav::eval {

inline constexpr double kDefaultClickThreshold = 0.14;

enum class TextMatch { kExactCaseInsensitive };

struct MatchRule {
  // Euclidean distance in normalized screen units.
  double click_distance_threshold = kDefaultClickThreshold;
  TextMatch text_match = TextMatch::kExactCaseInsensitive;
  double tap_threshold = kDefaultTapThreshold;

  bool IsValid() const {
    return click_distance_threshold > 0.0 && click_distance_threshold < 1.0;
  }
};

enum class VerdictReason {
  kTypeMismatch,
  kDistancePass,
  kDistanceFail,
  kSameBBoxPass,
  kScrollDirPass,
  kScrollDirFail,
  kTextPass,
  kTextFail,
  kStatusPass,
  kParseFailure,
};

std::string_view ToString(VerdictReason r);
std::optional<VerdictReason> ParseVerdictReason(std::string_view name);

struct StepVerdict {
  bool correct = false;
  VerdictReason reason = VerdictReason::kParseFailure;
  friend bool operator==(const StepVerdict&, const StepVerdict&) = default;
};

// nullopt stands for a parse failure or a missing prediction.
using Prediction = std::optional<Action>;

StepVerdict MatchStep(const Prediction& pred, const Action& gold,
                      std::span<const UIElement> gold_elements,
                      const MatchRule& rule = {});

struct EpisodeResult {
  std::string episode_id;
  Category category = Category::kCustom;
  std::vector<StepVerdict> verdicts;
  int correct = 0;
  // Correct steps over episode length.
  double fraction = 0.0;
};

// Predictions align with steps by index; missing ones count as incorrect.
EpisodeResult ScoreEpisodeDetailed(std::span<const Prediction> preds,
                                   const Episode& episode,
                                   const MatchRule& rule = {});
double ScoreEpisode(std::span<const Prediction> preds, const Episode& episode,
                    const MatchRule& rule = {});

struct ScoreReport {
  std::map<std::string, double> per_episode;
  // Percentages.
  std::map<Category, double> per_category;
  double overall = 0.0;
  std::map<Category, int> episodes_per_category;
  int episodes = 0;
  int steps = 0;
  int correct_steps = 0;
};

// Throws ContractViolation on empty input.
ScoreReport Aggregate(std::span<const EpisodeResult> results);
// Category scores given directly as percentages.
ScoreReport AggregateCategoryScores(const std::map<Category, double>& category_scores);

nlohmann::json ToJson(const ScoreReport& report);

// Table layout: Model | Overall | General | Install | GoogleApps | Single |
// WebShopping, plus any other category present. Two decimals.
std::string MarkdownTable(const std::map<std::string, ScoreReport>& rows);
std::string CsvTable(const std::map<std::string, ScoreReport>& rows);

struct Judgment {
  std::string sample_id;
  int score = 0;  // 0 or 1
  std::string note;
  std::int64_t timestamp_ms = 0;
};

struct HumanAccuracy {
  double fraction = 0.0;
  double percent = 0.0;        // unrounded
  double display_percent = 0.0;  // one decimal
  int judged = 0;
  int correct = 0;
};

// One judgment per sample; on duplicates the latest timestamp wins, ties go
// to the later entry. Throws ContractViolation on an empty set or a score
// outside {0, 1}.
HumanAccuracy ComputeHumanAccuracy(std::span<const Judgment> judgments);

// Latest judgment per sample, keyed by sample id.
std::map<std::string, Judgment> LatestJudgments(std::span<const Judgment> judgments);

double RoundTo(double value, int decimals);

// Error analysis.

struct ScoredStep {
  std::string episode_id;
  int step = 0;
  Prediction pred;
  Action gold;
  std::vector<UIElement> gold_elements;
  StepVerdict verdict;
};

enum class ReviewBucket {
  // Prediction and gold land on distinct elements with the same content,
  // e.g. two identical logos on one screen.
  kSameTargetCandidate,
  // Prediction and gold land on distinct but touching elements; the target
  // may be over-segmented.
  kOverSegmentationCandidate,
  // Different action types, e.g. search instead of scroll; another valid
  // path may exist.
  kAlternativeActionCandidate,
};

std::string_view ToString(ReviewBucket b);

struct StepRef {
  std::string episode_id;
  int step = 0;
  std::string detail;
  friend bool operator==(const StepRef&, const StepRef&) = default;
};

struct TriageReport {
  std::map<VerdictReason, int> incorrect_by_reason;
  std::map<ReviewBucket, std::vector<StepRef>> review;

  bool empty() const { return incorrect_by_reason.empty() && review.empty(); }
};

// Gap (normalized units) under which two boxes count as touching.
inline constexpr double kAdjacencyGap = 0.01;

TriageReport Triage(std::span<const ScoredStep> steps,
                    const MatchRule& rule = {});
nlohmann::json ToJson(const TriageReport& report);

}  // namespace guinav::eval

#endif  // GUINAV_EVALUATOR_H_
