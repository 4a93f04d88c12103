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
#ifndef GUINAV_REMOTE_BACKEND_H_
#define GUINAV_REMOTE_BACKEND_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <semaphore>
#include <string>
#include <utility>
#include <vector>

#include "guinav/llm.h"

namespace guinav::llm {

inline constexpr char kDefaultApiKeyEnv[] = "GUI_AGENT_API_KEY";

struct RemoteConfig {
  // Full URL, e.g. https://host/v1/chat/completions.
  std::string endpoint;
  std::string model;
  std::string api_key;
  std::string auth_header = "Authorization";
  std::string auth_prefix = "Bearer ";
  int max_attempts = 5;
  std::chrono::milliseconds backoff_base{1000};
  double jitter = 0.25;  // multiplicative, uniform in [1 - j, 1 + j]
  int max_in_flight = 4;
  std::chrono::seconds timeout{120};
  std::uint64_t jitter_seed = 0x9e3779b97f4a7c15ULL;
};

struct HttpResponse {
  int status = 0;
  std::string body;
  // Seconds, when the server sent Retry-After.
  std::optional<double> retry_after;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  // Throws TransientError when no response was received.
  virtual HttpResponse Post(const std::string& body, const Headers& headers) = 0;
};

// cpp-httplib transport; supports http:// and https:// endpoints.
std::unique_ptr<HttpTransport> MakeHttpTransport(const std::string& endpoint,
                                                 std::chrono::seconds timeout);

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// Chat-completion JSON wire format with base64 data-URL images.
std::string EncodeChatBody(const RemoteConfig& config, const ChatRequest& request);
ChatResponse DecodeChatBody(const std::string& body);

std::string Base64Encode(const Bytes& bytes);

// Reads the credential from the environment. Throws AuthError when unset.
std::string ApiKeyFromEnv(const std::string& variable = kDefaultApiKeyEnv);

class RemoteBackend : public Backend {
 public:
  explicit RemoteBackend(RemoteConfig config,
                         std::unique_ptr<HttpTransport> transport = nullptr,
                         Sleeper sleeper = nullptr);

  // Retries transient failures and 429s with exponential backoff; 401/403
  // fail immediately with AuthError. At most max_in_flight requests are on
  // the wire at any time.
  ChatResponse Complete(const ChatRequest& request) override;
  std::string id() const override { return "remote:" + config_.model; }

  std::chrono::milliseconds BackoffDelay(int attempt, std::optional<double> retry_after);

 private:
  RemoteConfig config_;
  std::unique_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
  std::counting_semaphore<1 << 16> in_flight_;
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
};

}  // namespace guinav::llm

#endif  // GUINAV_REMOTE_BACKEND_H_
