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

#include "guinav/codec.h"

#include <string>

namespace guinav {
namespace {

using nlohmann::json;

const json& Field(const json& j, const std::string& ptr, const char* key) {
  if (!j.is_object()) throw DecodeError(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) {
    throw DecodeError(ptr + "/" + key, "required field missing");
  }
  return *it;
}

double Number(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw DecodeError(ptr, "expected a number");
  return j.get<double>();
}

std::string String(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw DecodeError(ptr, "expected a string");
  return j.get<std::string>();
}

Point DecodePoint(const json& j, const std::string& ptr) {
  return {Number(Field(j, ptr, "x"), ptr + "/x"),
          Number(Field(j, ptr, "y"), ptr + "/y")};
}

BBox DecodeBBox(const json& j, const std::string& ptr) {
  return {Number(Field(j, ptr, "x"), ptr + "/x"),
          Number(Field(j, ptr, "y"), ptr + "/y"),
          Number(Field(j, ptr, "w"), ptr + "/w"),
          Number(Field(j, ptr, "h"), ptr + "/h")};
}

UIElement DecodeElement(const json& j, const std::string& ptr) {
  UIElement e;
  e.bbox = DecodeBBox(Field(j, ptr, "bbox"), ptr + "/bbox");
  if (auto it = j.find("text"); it != j.end()) {
    e.ocr_text = String(*it, ptr + "/text");
  }
  if (auto it = j.find("icon_class"); it != j.end()) {
    e.icon_class = String(*it, ptr + "/icon_class");
  }
  if (e.ocr_text.has_value() == e.icon_class.has_value()) {
    throw DecodeError(ptr, "exactly one of text or icon_class is required");
  }
  if (auto it = j.find("source"); it != j.end()) {
    auto source = ParseElementSource(String(*it, ptr + "/source"));
    if (!source) throw DecodeError(ptr + "/source", "unknown element source");
    e.source = *source;
  }
  return e;
}

Action DecodeActionAt(const json& j, const std::string& ptr) {
  Action a;
  const std::string kind_name = String(Field(j, ptr, "kind"), ptr + "/kind");
  auto kind = ParseActionKind(kind_name);
  if (!kind) throw DecodeError(ptr + "/kind", "unknown action kind '" + kind_name + "'");
  a.kind = *kind;
  if (auto it = j.find("touch"); it != j.end() && !it->is_null()) {
    a.touch = DecodePoint(*it, ptr + "/touch");
  }
  if (auto it = j.find("lift"); it != j.end() && !it->is_null()) {
    a.lift = DecodePoint(*it, ptr + "/lift");
  }
  if (auto it = j.find("text"); it != j.end() && !it->is_null()) {
    a.text = String(*it, ptr + "/text");
  }
  return a;
}

Step DecodeStep(const json& j, const std::string& ptr) {
  Step s;
  const json& index = Field(j, ptr, "index");
  if (!index.is_number_integer()) throw DecodeError(ptr + "/index", "expected an integer");
  s.index = index.get<int>();
  s.screenshot = String(Field(j, ptr, "screenshot"), ptr + "/screenshot");
  const json& elements = Field(j, ptr, "elements");
  if (!elements.is_array()) throw DecodeError(ptr + "/elements", "expected an array");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    s.elements.push_back(
        DecodeElement(elements[i], ptr + "/elements/" + std::to_string(i)));
  }
  s.gold_action =
      DecodeActionAt(Field(j, ptr, "gold_action"), ptr + "/gold_action");
  return s;
}

}  // namespace

void to_json(json& j, const Point& p) { j = json{{"x", p.x}, {"y", p.y}}; }
void from_json(const json& j, Point& p) { p = DecodePoint(j, ""); }

void to_json(json& j, const BBox& b) {
  j = json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}};
}
void from_json(const json& j, BBox& b) { b = DecodeBBox(j, ""); }

void to_json(json& j, const UIElement& e) {
  j = json{{"bbox", e.bbox}, {"source", ToString(e.source)}};
  if (e.ocr_text) j["text"] = *e.ocr_text;
  if (e.icon_class) j["icon_class"] = *e.icon_class;
}
void from_json(const json& j, UIElement& e) { e = DecodeElement(j, ""); }

void to_json(json& j, const Action& a) {
  j = json{{"kind", ToString(a.kind)}};
  if (a.touch) j["touch"] = *a.touch;
  if (a.lift) j["lift"] = *a.lift;
  if (a.text) j["text"] = *a.text;
}
void from_json(const json& j, Action& a) { a = DecodeActionAt(j, ""); }

void to_json(json& j, const Step& s) {
  j = json{{"index", s.index},
           {"screenshot", s.screenshot},
           {"elements", s.elements},
           {"gold_action", s.gold_action}};
}
void from_json(const json& j, Step& s) { s = DecodeStep(j, ""); }

void to_json(json& j, const Episode& e) {
  j = json{{"episode_id", e.episode_id},
           {"instruction", e.instruction},
           {"category", ToString(e.category)},
           {"steps", e.steps}};
}
void from_json(const json& j, Episode& e) { e = DecodeEpisode(j); }

Episode DecodeEpisode(const json& j) {
  Episode e;
  e.episode_id = String(Field(j, "", "episode_id"), "/episode_id");
  e.instruction = String(Field(j, "", "instruction"), "/instruction");
  const std::string cat = String(Field(j, "", "category"), "/category");
  auto category = ParseCategory(cat);
  if (!category) throw DecodeError("/category", "unknown category '" + cat + "'");
  e.category = *category;
  const json& steps = Field(j, "", "steps");
  if (!steps.is_array()) throw DecodeError("/steps", "expected an array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    e.steps.push_back(DecodeStep(steps[i], "/steps/" + std::to_string(i)));
  }
  return e;
}

Action DecodeAction(const json& j) { return DecodeActionAt(j, ""); }

}  // namespace guinav
