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
#ifndef GUINAV_SOM_H_
#define GUINAV_SOM_H_

// Set-of-Mark annotation: draws numeric tags over detected UI elements and
// keeps the tag -> element mapping used to ground model output.

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "guinav/errors.h"
#include "guinav/image.h"
#include "guinav/model.h"

namespace guinav::som {

enum class TagPlacement { kLeftSide, kCenter };
enum class TagShape { kBlackSquare, kRedCircle };

struct TagStyle {
  TagPlacement placement = TagPlacement::kCenter;
  TagShape shape = TagShape::kBlackSquare;
  // Target glyph height as a fraction of the image height.
  double font_scale = 0.02;

  // The three ablated styles. Any other combination is a custom override.
  static TagStyle BySide() { return {TagPlacement::kLeftSide, TagShape::kBlackSquare}; }
  static TagStyle Red() { return {TagPlacement::kCenter, TagShape::kRedCircle}; }
  static TagStyle Center() { return {TagPlacement::kCenter, TagShape::kBlackSquare}; }

  bool IsAblatedStyle() const;
  friend bool operator==(const TagStyle&, const TagStyle&) = default;
};

// "by-side", "red", "center".
std::optional<TagStyle> ParseTagStyle(std::string_view name);
std::string_view StyleName(const TagStyle& style);

// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool Contains(int x, int y) const { return x0 <= x && x < x1 && y0 <= y && y < y1; }
  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

long IntersectionArea(const PixelRect& a, const PixelRect& b);

struct TagGlyph {
  int tag_id = 0;
  PixelRect rect;
  friend bool operator==(const TagGlyph&, const TagGlyph&) = default;
};

// Pixel size of one font cell (stroke width) for a given image height.
int GlyphCellSize(int image_height, double font_scale);

// Computes where each tag glyph is drawn. Tag i (1-based) belongs to
// elements[i - 1]. Glyphs are clamped to lie inside the image.
std::vector<TagGlyph> LayoutGlyphs(int width, int height,
                                   std::span<const UIElement> elements,
                                   const TagStyle& style);

using SharedBytes = std::shared_ptr<const Bytes>;

struct TaggedScreen {
  SharedBytes raw_png;
  SharedBytes tagged_png;
  int width = 0;
  int height = 0;
  // Tags are 1..N in element order.
  std::map<int, UIElement> tag_map;
  std::vector<TagGlyph> glyphs;
  TagStyle style;

  int tag_count() const { return static_cast<int>(tag_map.size()); }
};

// Thrown when element boxes are invalid; lists the offending element
// indices (0-based).
class AnnotationError : public Error {
 public:
  AnnotationError(std::vector<std::size_t> indices, const std::string& message)
      : Error(message), indices_(std::move(indices)) {}
  const std::vector<std::size_t>& offending_indices() const { return indices_; }

 private:
  std::vector<std::size_t> indices_;
};

class UnknownTagError : public Error {
 public:
  UnknownTagError(int tag, int tag_count);
  int tag() const { return tag_; }
  int tag_count() const { return tag_count_; }

 private:
  int tag_;
  int tag_count_;
};

// Pure function of (png bytes, elements, style). Throws ImageDecodeError
// or AnnotationError.
TaggedScreen Annotate(SharedBytes raw_png, std::span<const UIElement> elements,
                      const TagStyle& style);
TaggedScreen Annotate(const Image& raw, std::span<const UIElement> elements,
                      const TagStyle& style);

// Center of the tagged element's box. Throws UnknownTagError.
Point ResolveTag(const TaggedScreen& screen, int tag_id);

// Pairs (a, b), a < b, whose glyph rectangles overlap with positive area,
// sorted lexicographically.
std::vector<std::pair<int, int>> CollisionReport(const TaggedScreen& screen);

// "1..N", or "none" for a screen without tags.
std::string TagRange(const TaggedScreen& screen);

}  // namespace guinav::som

#endif  // GUINAV_SOM_H_
