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

#include "guinav/replay.h"

#include <algorithm>
#include <nlohmann/json.hpp>

namespace guinav::llm {
namespace {

using nlohmann::json;

constexpr std::size_t kExcerptChars = 240;

json EncodeResponse(const ChatResponse& r) {
  return {{"text", r.text},
          {"usage",
           {{"prompt_tokens", r.usage.prompt_tokens},
            {"completion_tokens", r.usage.completion_tokens}}},
          {"latency_ms", r.latency_ms},
          {"backend_id", r.backend_id}};
}

ChatResponse DecodeResponse(const json& j) {
  ChatResponse r;
  r.text = j.at("text").get<std::string>();
  if (j.contains("usage")) {
    r.usage.prompt_tokens = j["usage"].value("prompt_tokens", std::int64_t{0});
    r.usage.completion_tokens = j["usage"].value("completion_tokens", std::int64_t{0});
  }
  r.latency_ms = j.value("latency_ms", 0.0);
  r.backend_id = j.value("backend_id", std::string("replay"));
  return r;
}

// Bounded Levenshtein distance for miss diagnostics.
std::size_t EditDistance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

RecordingBackend::RecordingBackend(std::shared_ptr<Backend> inner,
                                   std::filesystem::path session)
    : inner_(std::move(inner)) {
  if (!inner_) throw ContractViolation("RecordingBackend needs an inner backend");
  if (session.has_parent_path()) std::filesystem::create_directories(session.parent_path());
  out_.open(session, std::ios::trunc);
  if (!out_) throw IoError("cannot open session file " + session.string());
}

ChatResponse RecordingBackend::Complete(const ChatRequest& request) {
  ChatResponse response = inner_->Complete(request);
  json record = {{"digest", RequestDigest(request)},
                 {"response", EncodeResponse(response)},
                 {"request_excerpt", request.user_text.substr(0, kExcerptChars)}};
  std::lock_guard lock(mu_);
  out_ << record.dump() << '\n';
  out_.flush();
  return response;
}

ReplayBackend::ReplayBackend(const std::filesystem::path& session) {
  std::ifstream in(session);
  if (!in) throw IoError("cannot open session file " + session.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      Entry& e = entries_[j.at("digest").get<std::string>()];
      e.responses.push_back(DecodeResponse(j.at("response")));
      e.excerpt = j.value("request_excerpt", std::string());
      ++total_;
    } catch (const json::exception& e) {
      throw IoError(session.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

ChatResponse ReplayBackend::Complete(const ChatRequest& request) {
  const std::string digest = RequestDigest(request);
  std::lock_guard lock(mu_);
  auto it = entries_.find(digest);
  if (it == entries_.end()) {
    const std::string excerpt = request.user_text.substr(0, kExcerptChars);
    std::string nearest;
    std::size_t best = static_cast<std::size_t>(-1);
    for (const auto& [d, entry] : entries_) {
      const std::size_t dist = EditDistance(excerpt, entry.excerpt);
      if (dist < best) {
        best = dist;
        nearest = d;
      }
    }
    std::string message = "no recorded response for digest " + digest;
    if (!nearest.empty()) {
      message += "; nearest recorded request " + nearest + " (edit distance " +
                 std::to_string(best) + " over the first " +
                 std::to_string(kExcerptChars) + " chars): \"" +
                 entries_[nearest].excerpt.substr(0, 80) + "\"";
    }
    throw ReplayMissError(digest, nearest, message);
  }
  Entry& e = it->second;
  const std::size_t i = std::min(e.cursor, e.responses.size() - 1);
  ++e.cursor;
  return e.responses[i];
}

std::shared_ptr<Backend> OpenSession(SessionMode mode,
                                     const std::filesystem::path& session,
                                     std::shared_ptr<Backend> inner) {
  if (mode == SessionMode::kReplay) return std::make_shared<ReplayBackend>(session);
  return std::make_shared<RecordingBackend>(std::move(inner), session);
}

}  // namespace guinav::llm
