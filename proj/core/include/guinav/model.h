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

#ifndef GUINAV_MODEL_H_
#define GUINAV_MODEL_H_

// Core value types shared by every module: normalized screen geometry, UI
// elements, the executable action taxonomy and gold episodes.
//
// Coordinates are normalized to [0, 1] with the origin at the top-left corner
// and y increasing downward. Pixel coordinates only exist inside the
// annotator.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace guinav {

// Slack allowed on x + w and y + h for float rounding.
inline constexpr double kBoxEpsilon = 1e-6;

// Slack on distance thresholds, so a boundary value written in decimal
// compares as inclusive.
inline constexpr double kDistanceEpsilon = 1e-9;

// Touch/lift displacement at or below which a dual-point gesture is a tap.
inline constexpr double kDefaultTapThreshold = 0.04;

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool IsValid() const;
  friend bool operator==(const Point&, const Point&) = default;
};

double Distance(const Point& a, const Point& b);

// Axis-aligned box stored as normalized top-left corner plus extent.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool IsValid() const;
  friend bool operator==(const BBox&, const BBox&) = default;
};

Point BBoxCenter(const BBox& box);

// Closed-interval containment: boundary points are inside.
bool PointInBBox(const Point& p, const BBox& box);

enum class ElementSource { kOcr, kIconDetector, kDataset };

struct UIElement {
  BBox bbox;
  // Exactly one of the two is set.
  std::optional<std::string> ocr_text;
  std::optional<std::string> icon_class;
  ElementSource source = ElementSource::kDataset;

  bool IsValid() const;
  // The OCR text or icon class, whichever is present.
  const std::string& Content() const;
  friend bool operator==(const UIElement&, const UIElement&) = default;
};

UIElement TextElement(BBox box, std::string text,
                      ElementSource source = ElementSource::kDataset);
UIElement IconElement(BBox box, std::string icon_class,
                      ElementSource source = ElementSource::kDataset);

enum class ActionKind {
  kDualPoint,
  kTypeText,
  kPressBack,
  kPressHome,
  kPressEnter,
  kStatusComplete,
  kStatusImpossible,
};

inline constexpr ActionKind kAllActionKinds[] = {
    ActionKind::kDualPoint,      ActionKind::kTypeText,
    ActionKind::kPressBack,      ActionKind::kPressHome,
    ActionKind::kPressEnter,     ActionKind::kStatusComplete,
    ActionKind::kStatusImpossible,
};

struct Action {
  ActionKind kind = ActionKind::kStatusComplete;
  std::optional<Point> touch;
  std::optional<Point> lift;
  std::optional<std::string> text;

  // dual_point carries both points, type_text a non-empty text, and every
  // other kind no payload at all.
  bool IsValid() const;
  bool IsStatus() const {
    return kind == ActionKind::kStatusComplete ||
           kind == ActionKind::kStatusImpossible;
  }

  static Action DualPoint(Point touch, Point lift);
  static Action Tap(Point at) { return DualPoint(at, at); }
  static Action TypeText(std::string text);
  static Action Simple(ActionKind kind);

  friend bool operator==(const Action&, const Action&) = default;
};

enum class GestureClass { kTap, kScrollUp, kScrollDown, kScrollLeft, kScrollRight };

// Classifies a dual-point action. Directions follow finger motion, so a
// swipe with negative dy is scroll_up. Ties between |dx| and |dy| resolve to
// the horizontal axis. Throws ContractViolation for other kinds.
GestureClass ClassifyGesture(const Action& action,
                             double tap_threshold = kDefaultTapThreshold);

bool IsScroll(GestureClass g);

enum class Category {
  kGeneral,
  kInstall,
  kGoogleApps,
  kSingle,
  kWebShopping,
  kIos,
  kCustom,
};

// The five Android-in-the-Wild subsets, in reporting order.
inline constexpr Category kAitwCategories[] = {
    Category::kGeneral, Category::kInstall, Category::kGoogleApps,
    Category::kSingle, Category::kWebShopping,
};

struct Step {
  int index = 0;
  // Path of the screenshot relative to the dataset root.
  std::string screenshot;
  std::vector<UIElement> elements;
  Action gold_action;

  friend bool operator==(const Step&, const Step&) = default;
};

struct Episode {
  std::string episode_id;
  std::string instruction;
  Category category = Category::kCustom;
  std::vector<Step> steps;

  friend bool operator==(const Episode&, const Episode&) = default;
};

// Stable wire names, e.g. "dual_point", "scroll_up", "webshopping".
std::string_view ToString(ActionKind kind);
std::string_view ToString(GestureClass g);
std::string_view ToString(Category c);
std::string_view ToString(ElementSource s);
std::optional<ActionKind> ParseActionKind(std::string_view name);
std::optional<Category> ParseCategory(std::string_view name);
std::optional<ElementSource> ParseElementSource(std::string_view name);

// Human-readable one-liner, used in transcripts and diagnostics.
std::string Describe(const Action& action);

}  // namespace guinav

#endif  // GUINAV_MODEL_H_
