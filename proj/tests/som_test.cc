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

#include "guinav/som.h"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <random>

#include "test_support.h"

namespace guinav::som {
namespace {

using ::testing::ElementsAre;
using ::testing::Pair;

std::shared_ptr<const Bytes> Png(int w, int h) {
  return std::make_shared<const Bytes>(guinav::testing::SolidPng(w, h));
}

// Ten adjacent 50 px boxes along the top-left of a 1000 x 1800 screen.
std::vector<UIElement> AdjacentRow() {
  std::vector<UIElement> row;
  for (int i = 0; i < 10; ++i) {
    row.push_back(TextElement({i * 50 / 1000.0, 0.5, 0.05, 0.05}, "item " + std::to_string(i)));
  }
  return row;
}

TEST(GlyphLayoutTest, CellSizeFollowsImageHeight) {
  EXPECT_EQ(GlyphCellSize(1800, 0.02), 4);
  EXPECT_EQ(GlyphCellSize(2400, 0.02), 5);
  EXPECT_EQ(GlyphCellSize(100, 0.02), 2);
}

TEST(GlyphLayoutTest, SquareAndCircleSizes) {
  const auto row = AdjacentRow();
  const auto squares = LayoutGlyphs(1000, 1800, row, TagStyle::Center());
  ASSERT_EQ(squares.size(), 10u);
  EXPECT_EQ(squares[0].rect.width(), 28);
  EXPECT_EQ(squares[0].rect.height(), 36);
  EXPECT_EQ(squares[9].rect.width(), 52);
  const auto circles = LayoutGlyphs(1000, 1800, row, TagStyle::Red());
  EXPECT_EQ(circles[0].rect.width(), 46);
  EXPECT_EQ(circles[0].rect.height(), 46);
}

TEST(GlyphLayoutTest, LeftSidePlacementSitsLeftOfBox) {
  const std::vector<UIElement> one{TextElement({0.5, 0.5, 0.1, 0.1}, "x")};
  const auto g = LayoutGlyphs(1000, 1800, one, TagStyle::BySide());
  EXPECT_EQ(g[0].rect.x1, 500);
  EXPECT_EQ(g[0].rect.x0, 472);
}

TEST(CollisionTest, LeftSideCollidesOnAdjacentBoxes) {
  const auto tagged = Annotate(Png(1000, 1800), AdjacentRow(), TagStyle::BySide());
  EXPECT_THAT(CollisionReport(tagged), ElementsAre(Pair(1, 2), Pair(9, 10)));
}

TEST(CollisionTest, CenterPlacementAvoidsCollisions) {
  const auto tagged = Annotate(Png(1000, 1800), AdjacentRow(), TagStyle::Center());
  EXPECT_TRUE(CollisionReport(tagged).empty());
}

TEST(AnnotateTest, EmptyElementsReturnsRawImage) {
  const auto raw = Png(64, 64);
  const auto tagged = Annotate(raw, {}, TagStyle::Center());
  EXPECT_EQ(tagged.tag_count(), 0);
  EXPECT_EQ(*tagged.tagged_png, *raw);
  EXPECT_EQ(TagRange(tagged), "none");
}

TEST(AnnotateTest, InvalidBoxesReported) {
  const std::vector<UIElement> elements{
      TextElement({0.1, 0.1, 0.1, 0.1}, "ok"),
      TextElement({0.95, 0.1, 0.1, 0.1}, "wide"),
      TextElement({0.1, 0.1, 0.0, 0.1}, "thin"),
  };
  try {
    Annotate(Png(100, 100), elements, TagStyle::Center());
    FAIL() << "expected AnnotationError";
  } catch (const AnnotationError& e) {
    EXPECT_THAT(e.offending_indices(), ElementsAre(1u, 2u));
  }
}

TEST(AnnotateTest, CorruptImageRejected) {
  auto junk = std::make_shared<const Bytes>(Bytes{1, 2, 3, 4});
  EXPECT_THROW(Annotate(junk, {}, TagStyle::Center()), ImageDecodeError);
}

TEST(AnnotateTest, GlyphPixelsUseStyleColour) {
  const std::vector<UIElement> one{IconElement({0.4, 0.4, 0.2, 0.2}, "gear")};
  const auto red = Annotate(Png(400, 400), one, TagStyle::Red());
  const Image img = DecodePng(*red.tagged_png);
  const PixelRect r = red.glyphs[0].rect;
  const Rgb c = img.at((r.x0 + r.x1) / 2, r.y0 + 2);
  EXPECT_GT(c.r, 150);
  EXPECT_LT(c.g, 80);

  const auto black = Annotate(Png(400, 400), one, TagStyle::Center());
  const Image img2 = DecodePng(*black.tagged_png);
  EXPECT_EQ(img2.at(black.glyphs[0].rect.x0, black.glyphs[0].rect.y0), (Rgb{0, 0, 0}));
  // Pixels outside every glyph are untouched.
  EXPECT_EQ(img2.at(0, 0), (Rgb{240, 240, 240}));
}

TEST(AnnotateTest, DeterministicBytes) {
  std::mt19937_64 rng(3);
  const auto elements = guinav::testing::RandomElements(rng, 12);
  const auto png = Png(320, 640);
  const auto a = Annotate(png, elements, TagStyle::Center());
  const auto b = Annotate(png, elements, TagStyle::Center());
  EXPECT_EQ(*a.tagged_png, *b.tagged_png);
}

TEST(AnnotateTest, TinyImageKeepsGlyphsInside) {
  std::mt19937_64 rng(9);
  const auto elements = guinav::testing::RandomElements(rng, 120);
  for (const TagStyle& style : {TagStyle::BySide(), TagStyle::Red(), TagStyle::Center()}) {
    const auto tagged = Annotate(Png(24, 24), elements, style);
    for (const TagGlyph& g : tagged.glyphs) {
      EXPECT_GE(g.rect.x0, 0);
      EXPECT_GE(g.rect.y0, 0);
      EXPECT_LE(g.rect.x1, 24);
      EXPECT_LE(g.rect.y1, 24);
    }
  }
}

TEST(ResolveTagTest, CenterOfTaggedBox) {
  const std::vector<UIElement> elements{TextElement({0.1, 0.2, 0.2, 0.2}, "a"),
                                        IconElement({0.5, 0.5, 0.4, 0.1}, "b")};
  const auto tagged = Annotate(Png(100, 200), elements, TagStyle::Center());
  EXPECT_EQ(TagRange(tagged), "1..2");
  const Point p = ResolveTag(tagged, 2);
  EXPECT_DOUBLE_EQ(p.x, 0.7);
  EXPECT_DOUBLE_EQ(p.y, 0.55);
  EXPECT_THROW(ResolveTag(tagged, 0), UnknownTagError);
  try {
    ResolveTag(tagged, 3);
  } catch (const UnknownTagError& e) {
    EXPECT_EQ(e.tag(), 3);
    EXPECT_EQ(e.tag_count(), 2);
    EXPECT_THAT(std::string(e.what()), ::testing::HasSubstr("1..2"));
  }
}

TEST(TagStyleTest, NamesAndAblationSet) {
  EXPECT_EQ(ParseTagStyle("by-side"), TagStyle::BySide());
  EXPECT_EQ(ParseTagStyle("red"), TagStyle::Red());
  EXPECT_EQ(ParseTagStyle("center"), TagStyle::Center());
  EXPECT_FALSE(ParseTagStyle("blue").has_value());
  EXPECT_TRUE(TagStyle::Red().IsAblatedStyle());
  TagStyle custom{TagPlacement::kLeftSide, TagShape::kRedCircle};
  EXPECT_FALSE(custom.IsAblatedStyle());
  EXPECT_EQ(StyleName(TagStyle::BySide()), "by-side");
}

}  // namespace
}  // namespace guinav::som
