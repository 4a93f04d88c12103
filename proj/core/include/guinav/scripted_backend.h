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
#ifndef GUINAV_SCRIPTED_BACKEND_H_
#define GUINAV_SCRIPTED_BACKEND_H_

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "guinav/llm.h"

namespace guinav::llm {

class ScriptExhaustedError : public BackendError {
 public:
  explicit ScriptExhaustedError(const std::string& m) : BackendError(m, false) {}
};

class ScriptMismatchError : public BackendError {
 public:
  explicit ScriptMismatchError(const std::string& m) : BackendError(m, false) {}
};

struct ScriptEntry {
  // Substring that must occur in ChatRequest::user_text.
  std::optional<std::string> user_text_contains;
  std::optional<std::size_t> image_count;
  std::string text;

  bool Matches(const ChatRequest& request) const;
};

// Deterministic canned-response backend. Each request consumes the first
// unconsumed entry (in script order) whose matcher accepts it.
class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(std::vector<ScriptEntry> script,
                           std::string id = "scripted");

  // JSONL, one {"match"?: str, "images"?: int, "text": str} per line.
  static std::vector<ScriptEntry> LoadScript(const std::filesystem::path& path);

  ChatResponse Complete(const ChatRequest& request) override;
  std::string id() const override { return id_; }

  std::size_t calls() const;
  std::size_t remaining() const;
  std::vector<ChatRequest> requests() const;

 private:
  mutable std::mutex mu_;
  std::vector<ScriptEntry> script_;
  std::vector<bool> consumed_;
  std::vector<ChatRequest> log_;
  std::string id_;
};

}  // namespace guinav::llm

#endif  // GUINAV_SCRIPTED_BACKEND_H_
