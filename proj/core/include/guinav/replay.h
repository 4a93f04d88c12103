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
#ifndef GUINAV_REPLAY_H_
#define GUINAV_REPLAY_H_

// Content-addressed record/replay of backend traffic. Session files are
// JSONL with one {"digest", "response", "request_excerpt"} record per call.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "guinav/llm.h"

namespace guinav::llm {

class ReplayMissError : public BackendError {
 public:
  ReplayMissError(std::string digest, std::string nearest, const std::string& m)
      : BackendError(m, false),
        digest_(std::move(digest)),
        nearest_(std::move(nearest)) {}
  const std::string& digest() const { return digest_; }
  const std::string& nearest_digest() const { return nearest_; }

 private:
  std::string digest_;
  std::string nearest_;
};

class RecordingBackend : public Backend {
 public:
  // Truncates the session file.
  RecordingBackend(std::shared_ptr<Backend> inner, std::filesystem::path session);

  ChatResponse Complete(const ChatRequest& request) override;
  std::string id() const override { return inner_->id(); }

 private:
  std::shared_ptr<Backend> inner_;
  std::mutex mu_;
  std::ofstream out_;
};

class ReplayBackend : public Backend {
 public:
  explicit ReplayBackend(const std::filesystem::path& session);

  // Identical requests are served in recorded order; once a digest's
  // responses run out the last one repeats.
  ChatResponse Complete(const ChatRequest& request) override;
  std::string id() const override { return "replay"; }

  std::size_t size() const { return total_; }

 private:
  struct Entry {
    std::vector<ChatResponse> responses;
    std::size_t cursor = 0;
    std::string excerpt;
  };
  std::mutex mu_;
  std::map<std::string, Entry> entries_;
  std::size_t total_ = 0;
};

enum class SessionMode { kRecord, kReplay };

// Record mode wraps inner; replay mode ignores it.
std::shared_ptr<Backend> OpenSession(SessionMode mode,
                                     const std::filesystem::path& session,
                                     std::shared_ptr<Backend> inner = nullptr);

}  // namespace guinav::llm

#endif  // GUINAV_REPLAY_H_
