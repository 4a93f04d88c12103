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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>

namespace guinav::som {
namespace {

// 5x7 digit bitmaps, one row per byte, bit 4 is the leftmost column.
constexpr std::array<std::array<std::uint8_t, 7>, 10> kDigits{{
    {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},  // 0
    {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},  // 1
    {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},  // 2
    {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},  // 3
    {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},  // 4
    {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},  // 5
    {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},  // 6
    {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // 7
    {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},  // 8
    {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},  // 9
}};

constexpr int kFontW = 5;
constexpr int kFontH = 7;
constexpr int kMinStroke = 2;
constexpr Rgb kBlack{0, 0, 0};
constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kRed{220, 20, 20};

// Text block size in cells: digits separated by one cell, padded by one
// cell on every side.
int TextCellsW(int digits) { return digits * (kFontW + 1) + 1; }
int TextCellsH() { return kFontH + 2; }

struct GlyphSize {
  int cell;
  int w;
  int h;
};

GlyphSize SizeFor(int digits, int cell, TagShape shape) {
  int w = TextCellsW(digits) * cell;
  int h = TextCellsH() * cell;
  if (shape == TagShape::kRedCircle) {
    // The circle must enclose the text block.
    const int side =
        static_cast<int>(std::ceil(std::hypot(w, h)));
    w = h = side;
  }
  return {cell, w, h};
}

void DrawText(Image& img, const std::string& digits, const PixelRect& rect,
              int cell, Rgb color) {
  const int text_w = TextCellsW(static_cast<int>(digits.size())) * cell;
  const int text_h = TextCellsH() * cell;
  const int ox = rect.x0 + (rect.width() - text_w) / 2 + cell;
  const int oy = rect.y0 + (rect.height() - text_h) / 2 + cell;
  for (std::size_t d = 0; d < digits.size(); ++d) {
    const auto& bitmap = kDigits[digits[d] - '0'];
    const int dx = ox + static_cast<int>(d) * (kFontW + 1) * cell;
    for (int row = 0; row < kFontH; ++row) {
      for (int col = 0; col < kFontW; ++col) {
        if ((bitmap[row] >> (kFontW - 1 - col)) & 1) {
          const int px = dx + col * cell;
          const int py = oy + row * cell;
          // Never paint outside the glyph rectangle.
          img.FillRect(std::max(px, rect.x0), std::max(py, rect.y0),
                       std::min(px + cell, rect.x1), std::min(py + cell, rect.y1),
                       color);
        }
      }
    }
  }
}

void DrawGlyph(Image& img, const TagGlyph& glyph, int cell, TagShape shape) {
  const PixelRect& r = glyph.rect;
  if (shape == TagShape::kBlackSquare) {
    img.FillRect(r.x0, r.y0, r.x1, r.y1, kBlack);
  } else {
    const double cx = (r.x0 + r.x1) / 2.0;
    const double cy = (r.y0 + r.y1) / 2.0;
    const double radius = std::min(r.width(), r.height()) / 2.0;
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) {
        if (std::hypot(x + 0.5 - cx, y + 0.5 - cy) <= radius) img.set(x, y, kRed);
      }
    }
  }
  DrawText(img, std::to_string(glyph.tag_id), r, cell, kWhite);
}

std::vector<std::size_t> InvalidElements(std::span<const UIElement> elements) {
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!elements[i].bbox.IsValid()) bad.push_back(i);
  }
  return bad;
}

void CheckElements(std::span<const UIElement> elements) {
  auto bad = InvalidElements(elements);
  if (bad.empty()) return;
  std::string message = "element bbox outside [0,1] at indices";
  for (std::size_t i : bad) message += " " + std::to_string(i);
  throw AnnotationError(std::move(bad), message);
}

}  // namespace

bool TagStyle::IsAblatedStyle() const {
  TagStyle probe = *this;
  probe.font_scale = 0.02;
  return probe == BySide() || probe == Red() || probe == Center();
}

std::optional<TagStyle> ParseTagStyle(std::string_view name) {
  if (name == "by-side" || name == "by_side" || name == "left_side") return TagStyle::BySide();
  if (name == "red") return TagStyle::Red();
  if (name == "center") return TagStyle::Center();
  return std::nullopt;
}

std::string_view StyleName(const TagStyle& style) {
  if (style.placement == TagPlacement::kLeftSide) {
    return style.shape == TagShape::kBlackSquare ? "by-side" : "custom";
  }
  return style.shape == TagShape::kRedCircle ? "red" : "center";
}

long IntersectionArea(const PixelRect& a, const PixelRect& b) {
  const long w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const long h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  return (w > 0 && h > 0) ? w * h : 0;
}

UnknownTagError::UnknownTagError(int tag, int tag_count)
    : Error("unknown tag " + std::to_string(tag) + "; valid tags are " +
            (tag_count > 0 ? "1.." + std::to_string(tag_count)
                           : std::string("none"))),
      tag_(tag),
      tag_count_(tag_count) {}

int GlyphCellSize(int image_height, double font_scale) {
  const long target = std::lround(font_scale * image_height);
  return std::max<int>(kMinStroke, static_cast<int>(target / TextCellsH()));
}

std::vector<TagGlyph> LayoutGlyphs(int width, int height,
                                   std::span<const UIElement> elements,
                                   const TagStyle& style) {
  std::vector<TagGlyph> glyphs;
  glyphs.reserve(elements.size());
  const int base_cell = GlyphCellSize(height, style.font_scale);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const int tag = static_cast<int>(i) + 1;
    const int digits = static_cast<int>(std::to_string(tag).size());
    GlyphSize size = SizeFor(digits, base_cell, style.shape);
    while ((size.w > width || size.h > height) && size.cell > 1) {
      size = SizeFor(digits, size.cell - 1, style.shape);
    }
    const int w = std::min(size.w, width);
    const int h = std::min(size.h, height);

    const BBox& box = elements[i].bbox;
    const Point center = BBoxCenter(box);
    int x0 = 0;
    if (style.placement == TagPlacement::kLeftSide) {
      x0 = static_cast<int>(std::floor(box.x * width)) - w;
    } else {
      x0 = static_cast<int>(std::lround(center.x * width - w / 2.0));
    }
    int y0 = static_cast<int>(std::lround(center.y * height - h / 2.0));
    x0 = std::clamp(x0, 0, width - w);
    y0 = std::clamp(y0, 0, height - h);
    glyphs.push_back({tag, {x0, y0, x0 + w, y0 + h}});
  }
  return glyphs;
}

TaggedScreen Annotate(const Image& raw, std::span<const UIElement> elements,
                      const TagStyle& style) {
  return Annotate(std::make_shared<const Bytes>(EncodePng(raw)), elements,
                  style);
}

TaggedScreen Annotate(SharedBytes raw_png, std::span<const UIElement> elements,
                      const TagStyle& style) {
  if (!raw_png) throw ContractViolation("Annotate: null image");
  CheckElements(elements);
  Image canvas = DecodePng(*raw_png);

  TaggedScreen out;
  out.width = canvas.width();
  out.height = canvas.height();
  out.style = style;
  out.glyphs = LayoutGlyphs(canvas.width(), canvas.height(), elements, style);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    out.tag_map.emplace(static_cast<int>(i) + 1, elements[i]);
  }
  if (elements.empty()) {
    out.tagged_png = raw_png;
  } else {
    const int base_cell = GlyphCellSize(canvas.height(), style.font_scale);
    for (const TagGlyph& g : out.glyphs) {
      // The layout may have shrunk the cell to fit a small image.
      int cell = base_cell;
      const int digits = static_cast<int>(std::to_string(g.tag_id).size());
      while (cell > 1 && (SizeFor(digits, cell, style.shape).w > g.rect.width() ||
                          SizeFor(digits, cell, style.shape).h > g.rect.height())) {
        --cell;
      }
      DrawGlyph(canvas, g, cell, style.shape);
    }
    out.tagged_png = std::make_shared<const Bytes>(EncodePng(canvas));
  }
  out.raw_png = std::move(raw_png);
  return out;
}

Point ResolveTag(const TaggedScreen& screen, int tag_id) {
  auto it = screen.tag_map.find(tag_id);
  if (it == screen.tag_map.end()) {
    throw UnknownTagError(tag_id, screen.tag_count());
  }
  return BBoxCenter(it->second.bbox);
}

std::vector<std::pair<int, int>> CollisionReport(const TaggedScreen& screen) {
  std::vector<std::pair<int, int>> pairs;
  const auto& g = screen.glyphs;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (IntersectionArea(g[i].rect, g[j].rect) > 0) {
        pairs.emplace_back(std::min(g[i].tag_id, g[j].tag_id),
                           std::max(g[i].tag_id, g[j].tag_id));
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

std::string TagRange(const TaggedScreen& screen) {
  if (screen.tag_map.empty()) return "none";
  return "1.." + std::to_string(screen.tag_count());
}

}  // namespace guinav::som
