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

#include "guinav/llm.h"

#include <charconv>
#include <string_view>

#include "guinav/sha256.h"

namespace guinav::llm {
namespace {

void Frame(Sha256& h, std::string_view tag, std::string_view value) {
  h.Update(tag).Update(":").Update(std::to_string(value.size())).Update(":");
  h.Update(value);
}

std::string ShortestDouble(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

std::string RequestDigest(const ChatRequest& request) {
  Sha256 h;
  h.Update("guinav.request.v1\n");
  Frame(h, "system", request.system_text);
  Frame(h, "user", request.user_text);
  Frame(h, "images", std::to_string(request.images.size()));
  for (const ImageInput& image : request.images) {
    const std::size_t n = image.png ? image.png->size() : 0;
    h.Update("image:").Update(std::to_string(n)).Update(":");
    if (image.png) h.Update(*image.png);
  }
  Frame(h, "temperature", ShortestDouble(request.decode.temperature));
  Frame(h, "max_tokens", std::to_string(request.decode.max_tokens));
  return h.Hex();
}

}  // namespace guinav::llm
