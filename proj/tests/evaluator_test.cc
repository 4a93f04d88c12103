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

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <random>

#include "guinav/errors.h"

namespace guinav::eval {
namespace {

using ::testing::HasSubstr;

const Action kBack = Action::Simple(ActionKind::kPressBack);

TEST(MatchStepTest, ClickWithinThreshold) {
  const Action gold = Action::Tap({0.5, 0.5});
  EXPECT_EQ(MatchStep(Action::Tap({0.6, 0.55}), gold, {}),
            (StepVerdict{true, VerdictReason::kDistancePass}));
  EXPECT_EQ(MatchStep(Action::Tap({0.7, 0.5}), gold, {}),
            (StepVerdict{false, VerdictReason::kDistanceFail}));
}

TEST(MatchStepTest, ExactThresholdAccepted) {
  const Action gold = Action::Tap({0.5, 0.5});
  EXPECT_TRUE(MatchStep(Action::Tap({0.64, 0.5}), gold, {}).correct);
  EXPECT_TRUE(MatchStep(Action::Tap({0.5, 0.36}), gold, {}).correct);
  EXPECT_FALSE(MatchStep(Action::Tap({0.6401, 0.5}), gold, {}).correct);
}

TEST(MatchStepTest, SameBoxRescuesDistantClick) {
  const std::vector<UIElement> elements{TextElement({0.1, 0.1, 0.8, 0.1}, "wide bar")};
  const StepVerdict v = MatchStep(Action::Tap({0.85, 0.15}), Action::Tap({0.15, 0.15}), elements);
  EXPECT_EQ(v, (StepVerdict{true, VerdictReason::kSameBBoxPass}));
  EXPECT_FALSE(MatchStep(Action::Tap({0.85, 0.5}), Action::Tap({0.15, 0.15}), elements).correct);
}

TEST(MatchStepTest, ScrollDirectionMustMatch) {
  const Action up = Action::DualPoint({0.5, 0.8}, {0.5, 0.2});
  EXPECT_EQ(MatchStep(Action::DualPoint({0.3, 0.9}, {0.3, 0.6}), up, {}).reason,
            VerdictReason::kScrollDirPass);
  EXPECT_EQ(MatchStep(Action::DualPoint({0.5, 0.2}, {0.5, 0.8}), up, {}).reason,
            VerdictReason::kScrollDirFail);
  EXPECT_EQ(MatchStep(Action::Tap({0.5, 0.5}), up, {}).reason, VerdictReason::kTypeMismatch);
  EXPECT_EQ(MatchStep(up, Action::Tap({0.5, 0.5}), {}).reason, VerdictReason::kTypeMismatch);
}

TEST(MatchStepTest, TextAndKeys) {
  EXPECT_EQ(MatchStep(Action::TypeText(" Milk Frother "), Action::TypeText("milk frother"), {})
                .reason,
            VerdictReason::kTextPass);
  EXPECT_EQ(MatchStep(Action::TypeText("milk"), Action::TypeText("milk frother"), {}).reason,
            VerdictReason::kTextFail);
  EXPECT_EQ(MatchStep(kBack, kBack, {}).reason, VerdictReason::kStatusPass);
  EXPECT_EQ(MatchStep(Action::Simple(ActionKind::kPressHome), kBack, {}).reason,
            VerdictReason::kTypeMismatch);
  EXPECT_FALSE(MatchStep(Action::Simple(ActionKind::kStatusImpossible),
                         Action::Simple(ActionKind::kStatusComplete), {})
                   .correct);
  EXPECT_EQ(MatchStep(std::nullopt, kBack, {}).reason, VerdictReason::kParseFailure);
}

TEST(MatchStepTest, CustomThreshold) {
  MatchRule rule;
  rule.click_distance_threshold = 0.05;
  EXPECT_FALSE(MatchStep(Action::Tap({0.6, 0.5}), Action::Tap({0.5, 0.5}), {}, rule).correct);
  MatchRule bad;
  bad.click_distance_threshold = 1.5;
  EXPECT_FALSE(bad.IsValid());
}

Episode ThreeSteps(Category c, const std::string& id) {
  Episode e;
  e.episode_id = id;
  e.category = c;
  e.steps = {{0, "a.png", {}, Action::Tap({0.5, 0.5})},
             {1, "b.png", {}, Action::TypeText("x")},
             {2, "c.png", {}, Action::Simple(ActionKind::kStatusComplete)}};
  return e;
}

TEST(ScoreEpisodeTest, FractionOfCorrectSteps) {
  const Episode e = ThreeSteps(Category::kGeneral, "e");
  std::vector<Prediction> preds{Action::Tap({0.55, 0.5}), Action::TypeText("y"),
                                Action::Simple(ActionKind::kStatusComplete)};
  EXPECT_DOUBLE_EQ(ScoreEpisode(preds, e), 2.0 / 3.0);
  preds.resize(1);
  const EpisodeResult r = ScoreEpisodeDetailed(preds, e);
  EXPECT_EQ(r.correct, 1);
  EXPECT_EQ(r.verdicts[2].reason, VerdictReason::kParseFailure);
}

TEST(AggregateTest, MeanOfCategoryMeans) {
  std::vector<EpisodeResult> results;
  auto add = [&](Category c, const std::string& id, double f) {
    EpisodeResult r;
    r.episode_id = id;
    r.category = c;
    r.fraction = f;
    results.push_back(r);
  };
  add(Category::kGeneral, "g1", 1.0);
  add(Category::kGeneral, "g2", 0.0);
  add(Category::kGeneral, "g3", 0.5);
  add(Category::kInstall, "i1", 0.25);
  const ScoreReport report = Aggregate(results);
  EXPECT_DOUBLE_EQ(report.per_category.at(Category::kGeneral), 50.0);
  EXPECT_DOUBLE_EQ(report.per_category.at(Category::kInstall), 25.0);
  EXPECT_DOUBLE_EQ(report.overall, 37.5);
  EXPECT_EQ(report.episodes, 4);
  EXPECT_EQ(report.episodes_per_category.at(Category::kGeneral), 3);
  EXPECT_THROW(Aggregate({}), ContractViolation);
  EXPECT_THROW(AggregateCategoryScores({}), ContractViolation);
}

TEST(AggregateTest, TablesFormatTwoDecimals) {
  const ScoreReport r = AggregateCategoryScores({{Category::kGeneral, 41.66},
                                                 {Category::kInstall, 42.64},
                                                 {Category::kGoogleApps, 49.82},
                                                 {Category::kSingle, 72.83},
                                                 {Category::kWebShopping, 45.73}});
  const std::string md = MarkdownTable({{"model", r}});
  EXPECT_THAT(md, HasSubstr("| Model | Overall | General | Install | GoogleApps | Single | "
                            "WebShopping |"));
  EXPECT_THAT(md, HasSubstr("| model | 50.54 | 41.66 | 42.64 | 49.82 | 72.83 | 45.73 |"));
  EXPECT_THAT(CsvTable({{"model", r}}), HasSubstr("model,50.54,41.66"));
  EXPECT_THAT(md, ::testing::Not(HasSubstr("iOS")));
}

TEST(HumanAccuracyTest, LatestJudgmentWins) {
  std::vector<Judgment> js{{"a", 0, "", 1}, {"b", 1, "", 1}, {"a", 1, "fixed", 5},
                           {"c", 1, "", 2}, {"c", 0, "late", 2}};
  const HumanAccuracy acc = ComputeHumanAccuracy(js);
  EXPECT_EQ(acc.judged, 3);
  EXPECT_EQ(acc.correct, 2);
  EXPECT_DOUBLE_EQ(acc.display_percent, 66.7);
  EXPECT_EQ(LatestJudgments(js).at("a").note, "fixed");
  EXPECT_THROW(ComputeHumanAccuracy({}), ContractViolation);
  std::vector<Judgment> bad{{"a", 2, "", 1}};
  EXPECT_THROW(ComputeHumanAccuracy(bad), ContractViolation);
}

TEST(HumanAccuracyTest, RoundTo) {
  EXPECT_DOUBLE_EQ(RoundTo(90.909, 1), 90.9);
  EXPECT_DOUBLE_EQ(RoundTo(74.545, 1), 74.5);
  EXPECT_DOUBLE_EQ(RoundTo(50.536, 2), 50.54);
}

TEST(TriageTest, BucketsCandidates) {
  // Two identical logos far apart: the model picked the other one.
  const std::vector<UIElement> logos{IconElement({0.05, 0.1, 0.1, 0.1}, "google_play"),
                                     IconElement({0.80, 0.8, 0.1, 0.1}, "google_play")};
  // Two touching boxes forming one visual control.
  const std::vector<UIElement> split{TextElement({0.1, 0.5, 0.2, 0.05}, "Add to"),
                                     TextElement({0.305, 0.5, 0.2, 0.05}, "cart")};
  const Action up = Action::DualPoint({0.5, 0.8}, {0.5, 0.2});
  std::vector<ScoredStep> steps;
  auto add = [&](Prediction pred, Action gold, std::vector<UIElement> elements) {
    ScoredStep s{"ep", static_cast<int>(steps.size()), pred, gold, elements, {}};
    s.verdict = MatchStep(pred, gold, elements);
    steps.push_back(s);
  };
  add(Action::Tap({0.85, 0.85}), Action::Tap({0.1, 0.15}), logos);
  add(Action::Tap({0.45, 0.52}), Action::Tap({0.12, 0.52}), split);
  add(Action::TypeText("shoes"), up, {});
  add(std::nullopt, up, {});
  add(Action::Tap({0.1, 0.15}), Action::Tap({0.1, 0.15}), logos);
  const TriageReport report = Triage(steps);
  EXPECT_EQ(report.incorrect_by_reason.at(VerdictReason::kDistanceFail), 2);
  EXPECT_EQ(report.incorrect_by_reason.at(VerdictReason::kTypeMismatch), 1);
  EXPECT_EQ(report.incorrect_by_reason.at(VerdictReason::kParseFailure), 1);
  ASSERT_EQ(report.review.at(ReviewBucket::kSameTargetCandidate).size(), 1u);
  EXPECT_EQ(report.review.at(ReviewBucket::kSameTargetCandidate)[0].step, 0);
  ASSERT_EQ(report.review.at(ReviewBucket::kOverSegmentationCandidate).size(), 1u);
  EXPECT_EQ(report.review.at(ReviewBucket::kOverSegmentationCandidate)[0].step, 1);
  ASSERT_EQ(report.review.at(ReviewBucket::kAlternativeActionCandidate).size(), 1u);
  EXPECT_EQ(report.review.at(ReviewBucket::kAlternativeActionCandidate)[0].step, 2);
  const auto j = ToJson(report);
  EXPECT_TRUE(j.contains("review"));
}

TEST(ClickPropertyTest, AgreesWithIndependentOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const Point g{unit(rng), unit(rng)};
    const Point p{std::clamp(g.x + 0.3 * (unit(rng) - 0.5), 0.0, 1.0),
                  std::clamp(g.y + 0.3 * (unit(rng) - 0.5), 0.0, 1.0)};
    const BBox box{std::max(0.0, g.x - 0.1), std::max(0.0, g.y - 0.02), 0.1, 0.04};
    const std::vector<UIElement> els{TextElement(box, "t")};
    const long double dx = static_cast<long double>(p.x) - g.x;
    const long double dy = static_cast<long double>(p.y) - g.y;
    const bool near = std::sqrt(dx * dx + dy * dy) <= 0.14L + 1e-9L;
    const auto in = [&](const Point& q) {
      return box.x <= q.x && q.x <= box.x + box.w && box.y <= q.y && q.y <= box.y + box.h;
    };
    const bool same = in(p) && in(g);
    EXPECT_EQ(MatchStep(Action::Tap(p), Action::Tap(g), els).correct, near || same);
  }
}

}  // namespace
}  // namespace guinav::eval
