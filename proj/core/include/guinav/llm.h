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
#ifndef GUINAV_LLM_H_
#define GUINAV_LLM_H_

// Provider-agnostic multimodal chat interface. Agents depend only on
// Backend; concrete implementations live in scripted_backend.h,
// remote_backend.h and replay.h.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "guinav/errors.h"
#include "guinav/image.h"

namespace guinav::llm {

using SharedBytes = std::shared_ptr<const Bytes>;

struct ImageInput {
  std::string label;  // "raw" or "tagged"; not part of the request digest.
  SharedBytes png;
};

struct DecodeParams {
  double temperature = 0.0;
  int max_tokens = 512;
  friend bool operator==(const DecodeParams&, const DecodeParams&) = default;
};

struct ChatRequest {
  std::string system_text;
  std::string user_text;
  // Raw screen first, tagged screen second.
  std::vector<ImageInput> images;
  DecodeParams decode;
};

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  friend bool operator==(const Usage&, const Usage&) = default;
};

struct ChatResponse {
  std::string text;
  Usage usage;
  double latency_ms = 0.0;
  std::string backend_id;
  friend bool operator==(const ChatResponse&, const ChatResponse&) = default;
};

class BackendError : public Error {
 public:
  BackendError(const std::string& message, bool retryable)
      : Error(message), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

class AuthError : public BackendError {
 public:
  explicit AuthError(const std::string& m) : BackendError(m, false) {}
};

class RateLimitedError : public BackendError {
 public:
  explicit RateLimitedError(const std::string& m) : BackendError(m, true) {}
};

// Connection failures and 5xx responses.
class TransientError : public BackendError {
 public:
  explicit TransientError(const std::string& m) : BackendError(m, true) {}
};

class MalformedResponseError : public BackendError {
 public:
  explicit MalformedResponseError(const std::string& m)
      : BackendError(m, false) {}
};

class Backend {
 public:
  virtual ~Backend() = default;
  // Thread-safe.
  virtual ChatResponse Complete(const ChatRequest& request) = 0;
  virtual std::string id() const = 0;
};

// SHA-256 over (system_text, user_text, image bytes, decode params) with
// length framing. Image labels are excluded.
std::string RequestDigest(const ChatRequest& request);

}  // namespace guinav::llm

#endif  // GUINAV_LLM_H_
