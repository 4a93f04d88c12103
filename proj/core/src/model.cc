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

#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "guinav/errors.h"

namespace guinav {
namespace {

bool InUnit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

template <typename Enum, std::size_t N>
std::optional<Enum> Lookup(
    const std::array<std::pair<Enum, std::string_view>, N>& table,
    std::string_view name) {
  for (const auto& [value, text] : table) {
    if (text == name) return value;
  }
  return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view Name(
    const std::array<std::pair<Enum, std::string_view>, N>& table,
    Enum value) {
  for (const auto& [v, text] : table) {
    if (v == value) return text;
  }
  return "unknown";
}

constexpr std::array<std::pair<ActionKind, std::string_view>, 7> kKindNames{{
    {ActionKind::kDualPoint, "dual_point"},
    {ActionKind::kTypeText, "type_text"},
    {ActionKind::kPressBack, "press_back"},
    {ActionKind::kPressHome, "press_home"},
    {ActionKind::kPressEnter, "press_enter"},
    {ActionKind::kStatusComplete, "status_complete"},
    {ActionKind::kStatusImpossible, "status_impossible"},
}};

constexpr std::array<std::pair<GestureClass, std::string_view>, 5>
    kGestureNames{{
        {GestureClass::kTap, "tap"},
        {GestureClass::kScrollUp, "scroll_up"},
        {GestureClass::kScrollDown, "scroll_down"},
        {GestureClass::kScrollLeft, "scroll_left"},
        {GestureClass::kScrollRight, "scroll_right"},
    }};

constexpr std::array<std::pair<Category, std::string_view>, 7> kCategoryNames{{
    {Category::kGeneral, "general"},
    {Category::kInstall, "install"},
    {Category::kGoogleApps, "googleapps"},
    {Category::kSingle, "single"},
    {Category::kWebShopping, "webshopping"},
    {Category::kIos, "ios"},
    {Category::kCustom, "custom"},
}};

constexpr std::array<std::pair<ElementSource, std::string_view>, 3>
    kSourceNames{{
        {ElementSource::kOcr, "ocr"},
        {ElementSource::kIconDetector, "icon_detector"},
        {ElementSource::kDataset, "dataset"},
    }};

}  // namespace

bool Point::IsValid() const { return InUnit(x) && InUnit(y); }

double Distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

bool BBox::IsValid() const {
  return InUnit(x) && InUnit(y) && InUnit(w) && InUnit(h) && w > 0.0 &&
         h > 0.0 && x + w <= 1.0 + kBoxEpsilon && y + h <= 1.0 + kBoxEpsilon;
}

Point BBoxCenter(const BBox& box) {
  return {box.x + box.w / 2.0, box.y + box.h / 2.0};
}

bool PointInBBox(const Point& p, const BBox& box) {
  return box.x <= p.x && p.x <= box.x + box.w && box.y <= p.y &&
         p.y <= box.y + box.h;
}

bool UIElement::IsValid() const {
  if (!bbox.IsValid()) return false;
  if (ocr_text.has_value() == icon_class.has_value()) return false;
  if (ocr_text && ocr_text->empty()) return false;
  return true;
}

const std::string& UIElement::Content() const {
  return ocr_text ? *ocr_text : icon_class.value();
}

UIElement TextElement(BBox box, std::string text, ElementSource source) {
  return UIElement{box, std::move(text), std::nullopt, source};
}

UIElement IconElement(BBox box, std::string icon_class, ElementSource source) {
  return UIElement{box, std::nullopt, std::move(icon_class), source};
}

bool Action::IsValid() const {
  switch (kind) {
    case ActionKind::kDualPoint:
      return touch && lift && touch->IsValid() && lift->IsValid() && !text;
    case ActionKind::kTypeText:
      return text && !text->empty() && !touch && !lift;
    default:
      return !touch && !lift && !text;
  }
}

Action Action::DualPoint(Point touch, Point lift) {
  return Action{ActionKind::kDualPoint, touch, lift, std::nullopt};
}

Action Action::TypeText(std::string text) {
  return Action{ActionKind::kTypeText, std::nullopt, std::nullopt,
                std::move(text)};
}

Action Action::Simple(ActionKind kind) {
  if (kind == ActionKind::kDualPoint || kind == ActionKind::kTypeText) {
    throw ContractViolation("Action::Simple: kind " +
                            std::string(ToString(kind)) + " carries a payload");
  }
  return Action{kind, std::nullopt, std::nullopt, std::nullopt};
}

GestureClass ClassifyGesture(const Action& action, double tap_threshold) {
  if (action.kind != ActionKind::kDualPoint || !action.touch || !action.lift) {
    throw ContractViolation("ClassifyGesture expects a dual_point action, got " +
                            std::string(ToString(action.kind)));
  }
  const double dx = action.lift->x - action.touch->x;
  const double dy = action.lift->y - action.touch->y;
  if (std::hypot(dx, dy) <= tap_threshold + kDistanceEpsilon) return GestureClass::kTap;
  if (std::abs(dx) >= std::abs(dy)) {
    return dx < 0 ? GestureClass::kScrollLeft : GestureClass::kScrollRight;
  }
  return dy < 0 ? GestureClass::kScrollUp : GestureClass::kScrollDown;
}

bool IsScroll(GestureClass g) { return g != GestureClass::kTap; }

std::string_view ToString(ActionKind kind) { return Name(kKindNames, kind); }
std::string_view ToString(GestureClass g) { return Name(kGestureNames, g); }
std::string_view ToString(Category c) { return Name(kCategoryNames, c); }
std::string_view ToString(ElementSource s) { return Name(kSourceNames, s); }

std::optional<ActionKind> ParseActionKind(std::string_view name) {
  return Lookup(kKindNames, name);
}
std::optional<Category> ParseCategory(std::string_view name) {
  return Lookup(kCategoryNames, name);
}
std::optional<ElementSource> ParseElementSource(std::string_view name) {
  return Lookup(kSourceNames, name);
}

std::string Describe(const Action& action) {
  std::ostringstream out;
  out << ToString(action.kind);
  if (action.touch && action.lift) {
    out << " (" << action.touch->x << ", " << action.touch->y << ") -> ("
        << action.lift->x << ", " << action.lift->y << ")";
  }
  if (action.text) out << " \"" << *action.text << "\"";
  return out.str();
}

}  // namespace guinav
