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

#include "guinav/scripted_backend.h"

#include <fstream>
#include <nlohmann/json.hpp>

namespace guinav::llm {

bool ScriptEntry::Matches(const ChatRequest& request) const {
  if (user_text_contains &&
      request.user_text.find(*user_text_contains) == std::string::npos) {
    return false;
  }
  if (image_count && request.images.size() != *image_count) return false;
  return true;
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> script, std::string id)
    : script_(std::move(script)),
      consumed_(script_.size(), false),
      id_(std::move(id)) {}

std::vector<ScriptEntry> ScriptedBackend::LoadScript(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open script " + path.string());
  std::vector<ScriptEntry> script;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
      throw IoError(path.string() + ":" + std::to_string(lineno) +
                    ": script entries need a string 'text'");
    }
    ScriptEntry entry;
    entry.text = j["text"].get<std::string>();
    if (j.contains("match")) entry.user_text_contains = j["match"].get<std::string>();
    if (j.contains("images")) entry.image_count = j["images"].get<std::size_t>();
    script.push_back(std::move(entry));
  }
  return script;
}

ChatResponse ScriptedBackend::Complete(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  log_.push_back(request);
  bool any_left = false;
  for (std::size_t i = 0; i < script_.size(); ++i) {
    if (consumed_[i]) continue;
    any_left = true;
    if (!script_[i].Matches(request)) continue;
    consumed_[i] = true;
    ChatResponse response;
    response.text = script_[i].text;
    response.backend_id = id_;
    response.usage.prompt_tokens =
        static_cast<std::int64_t>(request.user_text.size() / 4);
    response.usage.completion_tokens =
        static_cast<std::int64_t>(response.text.size() / 4);
    return response;
  }
  if (!any_left) {
    throw ScriptExhaustedError("script exhausted after " +
                               std::to_string(script_.size()) + " responses");
  }
  throw ScriptMismatchError("no remaining script entry matches request with " +
                            std::to_string(request.images.size()) +
                            " image(s): " + request.user_text.substr(0, 120));
}

std::size_t ScriptedBackend::calls() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

std::size_t ScriptedBackend::remaining() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (bool c : consumed_) n += c ? 0 : 1;
  return n;
}

std::vector<ChatRequest> ScriptedBackend::requests() const {
  std::lock_guard lock(mu_);
  return log_;
}

}  // namespace guinav::llm
