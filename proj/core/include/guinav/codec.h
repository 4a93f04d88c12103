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
#ifndef GUINAV_CODEC_H_
#define GUINAV_CODEC_H_

// JSON encoding of the core model types. Field names match the on-disk
// episode schema (core/schema/episode.schema.json).

#include <nlohmann/json.hpp>

#include "guinav/errors.h"
#include "guinav/model.h"

namespace guinav {

// Thrown when a JSON document does not decode into a model type. The
// pointer names the offending location, e.g. "/steps/0/gold_action/kind".
class DecodeError : public Error {
 public:
  DecodeError(std::string pointer, const std::string& message)
      : Error(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

void to_json(nlohmann::json& j, const Point& p);
void from_json(const nlohmann::json& j, Point& p);
void to_json(nlohmann::json& j, const BBox& b);
void from_json(const nlohmann::json& j, BBox& b);
void to_json(nlohmann::json& j, const UIElement& e);
void from_json(const nlohmann::json& j, UIElement& e);
void to_json(nlohmann::json& j, const Action& a);
void from_json(const nlohmann::json& j, Action& a);
void to_json(nlohmann::json& j, const Step& s);
void from_json(const nlohmann::json& j, Step& s);
void to_json(nlohmann::json& j, const Episode& e);
void from_json(const nlohmann::json& j, Episode& e);

// Decodes with DecodeError (carrying a JSON pointer) instead of the raw
// nlohmann exceptions.
Episode DecodeEpisode(const nlohmann::json& j);
Action DecodeAction(const nlohmann::json& j);

}  // namespace guinav

#endif  // GUINAV_CODEC_H_
