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

#include "guinav/model.h"

#include <gtest/gtest.h>

#include <random>

#include "guinav/codec.h"
#include "guinav/errors.h"

namespace guinav {
namespace {

using nlohmann::json;

TEST(PointTest, UnitSquareIsValid) {
  EXPECT_TRUE((Point{0.0, 1.0}).IsValid());
  EXPECT_FALSE((Point{-0.01, 0.5}).IsValid());
  EXPECT_FALSE((Point{0.5, 1.01}).IsValid());
  EXPECT_FALSE((Point{std::nan(""), 0.5}).IsValid());
}

TEST(BBoxTest, ValidityChecksExtentAndSize) {
  EXPECT_TRUE((BBox{0.2, 0.3, 0.8, 0.7}).IsValid());
  EXPECT_TRUE((BBox{0.2, 0.3, 0.8 + 5e-7, 0.7}).IsValid());
  EXPECT_FALSE((BBox{0.5, 0.5, 0.6, 0.1}).IsValid());
  EXPECT_FALSE((BBox{0.1, 0.1, 0.0, 0.1}).IsValid());
  EXPECT_FALSE((BBox{0.1, 0.1, 0.1, -0.1}).IsValid());
}

TEST(BBoxTest, CenterAndClosedContainment) {
  const BBox b{0.2, 0.4, 0.2, 0.2};
  const Point c = BBoxCenter(b);
  EXPECT_DOUBLE_EQ(c.x, 0.3);
  EXPECT_DOUBLE_EQ(c.y, 0.5);
  EXPECT_TRUE(PointInBBox({0.2, 0.4}, b));
  EXPECT_TRUE(PointInBBox({0.4, 0.6}, b));
  EXPECT_FALSE(PointInBBox({0.41, 0.5}, b));
}

TEST(UIElementTest, ExactlyOneContentField) {
  UIElement e = TextElement({0.1, 0.1, 0.2, 0.2}, "OK");
  EXPECT_TRUE(e.IsValid());
  EXPECT_EQ(e.Content(), "OK");
  e.icon_class = "button";
  EXPECT_FALSE(e.IsValid());
  e.ocr_text.reset();
  EXPECT_TRUE(e.IsValid());
  EXPECT_EQ(e.Content(), "button");
  e.icon_class.reset();
  EXPECT_FALSE(e.IsValid());
  EXPECT_FALSE(TextElement({0.1, 0.1, 0.2, 0.2}, "").IsValid());
}

TEST(ActionTest, PayloadRules) {
  EXPECT_TRUE(Action::Tap({0.5, 0.5}).IsValid());
  EXPECT_TRUE(Action::TypeText("hi").IsValid());
  EXPECT_FALSE(Action::TypeText("").IsValid());
  for (ActionKind k : {ActionKind::kPressBack, ActionKind::kPressHome, ActionKind::kPressEnter,
                       ActionKind::kStatusComplete, ActionKind::kStatusImpossible}) {
    EXPECT_TRUE(Action::Simple(k).IsValid()) << ToString(k);
  }
  EXPECT_THROW(Action::Simple(ActionKind::kDualPoint), ContractViolation);
  EXPECT_THROW(Action::Simple(ActionKind::kTypeText), ContractViolation);

  Action bad = Action::Simple(ActionKind::kPressBack);
  bad.text = "x";
  EXPECT_FALSE(bad.IsValid());
  Action half{ActionKind::kDualPoint, Point{0.1, 0.1}, std::nullopt, std::nullopt};
  EXPECT_FALSE(half.IsValid());
  EXPECT_TRUE(Action::Simple(ActionKind::kStatusImpossible).IsStatus());
  EXPECT_FALSE(Action::Simple(ActionKind::kPressEnter).IsStatus());
}

TEST(GestureTest, TapBelowThreshold) {
  EXPECT_EQ(ClassifyGesture(Action::DualPoint({0.5, 0.5}, {0.52, 0.52})), GestureClass::kTap);
  EXPECT_EQ(ClassifyGesture(Action::DualPoint({0.5, 0.5}, {0.54, 0.5})), GestureClass::kTap);
  EXPECT_EQ(ClassifyGesture(Action::DualPoint({0.5, 0.5}, {0.55, 0.5})),
            GestureClass::kScrollRight);
}

TEST(GestureTest, DirectionsFollowFingerMotion) {
  EXPECT_EQ(ClassifyGesture(Action::DualPoint({0.5, 0.8}, {0.5, 0.2})), GestureClass::kScrollUp);
  EXPECT_EQ(ClassifyGesture(Action::DualPoint({0.5, 0.2}, {0.5, 0.8})),
            GestureClass::kScrollDown);
  EXPECT_EQ(ClassifyGesture(Action::DualPoint({0.8, 0.5}, {0.2, 0.5})),
            GestureClass::kScrollLeft);
  EXPECT_EQ(ClassifyGesture(Action::DualPoint({0.2, 0.5}, {0.8, 0.5})),
            GestureClass::kScrollRight);
  // Equal |dx| and |dy| resolve horizontally.
  EXPECT_EQ(ClassifyGesture(Action::DualPoint({0.2, 0.2}, {0.5, 0.5})),
            GestureClass::kScrollRight);
  EXPECT_THROW(ClassifyGesture(Action::TypeText("x")), ContractViolation);
}

TEST(GestureTest, HorizontalMirrorSwapsLeftAndRight) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto mirror = [](GestureClass g) {
    if (g == GestureClass::kScrollLeft) return GestureClass::kScrollRight;
    if (g == GestureClass::kScrollRight) return GestureClass::kScrollLeft;
    return g;
  };
  for (int i = 0; i < 2000; ++i) {
    const Point a{unit(rng), unit(rng)};
    const Point b{unit(rng), unit(rng)};
    const GestureClass g = ClassifyGesture(Action::DualPoint(a, b));
    const GestureClass m = ClassifyGesture(Action::DualPoint({1 - a.x, a.y}, {1 - b.x, b.y}));
    EXPECT_EQ(m, mirror(g)) << a.x << "," << a.y << " -> " << b.x << "," << b.y;
  }
}

TEST(NamesTest, RoundTrip) {
  for (ActionKind k : kAllActionKinds) EXPECT_EQ(ParseActionKind(ToString(k)), k);
  for (Category c : {Category::kGeneral, Category::kInstall, Category::kGoogleApps,
                     Category::kSingle, Category::kWebShopping, Category::kIos,
                     Category::kCustom}) {
    EXPECT_EQ(ParseCategory(ToString(c)), c);
  }
  EXPECT_FALSE(ParseCategory("General").has_value());
  EXPECT_FALSE(ParseActionKind("click").has_value());
}

Episode SampleEpisode() {
  Episode e;
  e.episode_id = "ep-1";
  e.instruction = "Open settings";
  e.category = Category::kSingle;
  Step s0{0, "screens/a.png",
          {TextElement({0.1, 0.1, 0.3, 0.05}, "Settings", ElementSource::kOcr),
           IconElement({0.5, 0.5, 0.1, 0.1}, "gear", ElementSource::kIconDetector)},
          Action::Tap({0.25, 0.125})};
  Step s1{1, "screens/b.png", {}, Action::DualPoint({0.5, 0.8}, {0.5, 0.2})};
  Step s2{2, "screens/c.png", {}, Action::TypeText("dark \"mode\"")};
  Step s3{3, "screens/d.png", {}, Action::Simple(ActionKind::kStatusComplete)};
  e.steps = {s0, s1, s2, s3};
  return e;
}

TEST(CodecTest, EpisodeRoundTrip) {
  const Episode e = SampleEpisode();
  const json j = e;
  EXPECT_EQ(j.get<Episode>(), e);
  EXPECT_EQ(DecodeEpisode(json::parse(j.dump())), e);
}

TEST(CodecTest, RandomActionsRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    Action a;
    switch (rng() % 3) {
      case 0: a = Action::DualPoint({unit(rng), unit(rng)}, {unit(rng), unit(rng)}); break;
      case 1: a = Action::TypeText("t" + std::to_string(rng())); break;
      default: a = Action::Simple(ActionKind::kPressHome);
    }
    EXPECT_EQ(DecodeAction(json::parse(json(a).dump())), a);
  }
}

TEST(CodecTest, DecodeErrorCarriesPointer) {
  json j = SampleEpisode();
  j["steps"][1]["gold_action"]["kind"] = "fly";
  try {
    DecodeEpisode(j);
    FAIL() << "expected DecodeError";
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.pointer(), "/steps/1/gold_action/kind");
  }
  j = SampleEpisode();
  j["steps"][0]["elements"][0].erase("bbox");
  try {
    DecodeEpisode(j);
    FAIL() << "expected DecodeError";
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.pointer().rfind("/steps/0/elements/0", 0), 0u) << e.pointer();
  }
}

TEST(DescribeTest, Readable) {
  EXPECT_NE(Describe(Action::TypeText("abc")).find("abc"), std::string::npos);
  EXPECT_NE(Describe(Action::Simple(ActionKind::kPressBack)).find("press_back"),
            std::string::npos);
}

}  // namespace
}  // namespace guinav
