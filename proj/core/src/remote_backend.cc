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

#include "guinav/remote_backend.h"

#include <openssl/evp.h>

#include <cmath>
#include <cstdlib>
#include <nlohmann/json.hpp>
#include <thread>

namespace guinav::llm {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

class PermitGuard {
 public:
  explicit PermitGuard(std::counting_semaphore<1 << 16>& sem) : sem_(sem) {
    sem_.acquire();
  }
  ~PermitGuard() { sem_.release(); }
  PermitGuard(const PermitGuard&) = delete;
  PermitGuard& operator=(const PermitGuard&) = delete;

 private:
  std::counting_semaphore<1 << 16>& sem_;
};

std::string Snippet(const std::string& body) {
  return body.size() <= 200 ? body : body.substr(0, 200) + "...";
}

}  // namespace

std::string Base64Encode(const Bytes& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string ApiKeyFromEnv(const std::string& variable) {
  const char* value = std::getenv(variable.c_str());
  if (value == nullptr || *value == '\0') {
    throw AuthError("environment variable " + variable + " is not set");
  }
  return value;
}

std::string EncodeChatBody(const RemoteConfig& config,
                           const ChatRequest& request) {
  json content = json::array();
  content.push_back({{"type", "text"}, {"text", request.user_text}});
  for (const ImageInput& image : request.images) {
    if (!image.png) continue;
    content.push_back(
        {{"type", "image_url"},
         {"image_url",
          {{"url", "data:image/png;base64," + Base64Encode(*image.png)}}}});
  }
  json messages = json::array();
  if (!request.system_text.empty()) {
    messages.push_back({{"role", "system"}, {"content", request.system_text}});
  }
  messages.push_back({{"role", "user"}, {"content", content}});
  json body = {{"model", config.model},
               {"messages", messages},
               {"temperature", request.decode.temperature},
               {"max_tokens", request.decode.max_tokens}};
  return body.dump();
}

ChatResponse DecodeChatBody(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error&) {
    throw MalformedResponseError("response is not JSON: " + Snippet(body));
  }
  ChatResponse out;
  try {
    const json& message = j.at("choices").at(0).at("message");
    const json& content = message.at("content");
    if (content.is_string()) {
      out.text = content.get<std::string>();
    } else if (content.is_array()) {
      for (const json& part : content) {
        if (part.value("type", "") == "text") out.text += part.at("text").get<std::string>();
      }
    } else if (!content.is_null()) {
      throw MalformedResponseError("unsupported message content type");
    }
    if (auto it = j.find("usage"); it != j.end() && it->is_object()) {
      out.usage.prompt_tokens = it->value("prompt_tokens", std::int64_t{0});
      out.usage.completion_tokens = it->value("completion_tokens", std::int64_t{0});
    }
  } catch (const json::exception& e) {
    throw MalformedResponseError(std::string("unexpected response shape: ") +
                                 e.what());
  }
  return out;
}

RemoteBackend::RemoteBackend(RemoteConfig config,
                             std::unique_ptr<HttpTransport> transport,
                             Sleeper sleeper)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      in_flight_(std::max(1, config_.max_in_flight)),
      rng_(config_.jitter_seed) {
  if (config_.endpoint.empty()) throw ContractViolation("remote backend needs an endpoint");
  if (config_.max_attempts < 1) throw ContractViolation("max_attempts must be >= 1");
  if (!transport_) transport_ = MakeHttpTransport(config_.endpoint, config_.timeout);
  if (!sleeper_) {
    sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::chrono::milliseconds RemoteBackend::BackoffDelay(
    int attempt, std::optional<double> retry_after) {
  if (retry_after && *retry_after >= 0) {
    return std::chrono::milliseconds(
        static_cast<std::int64_t>(std::ceil(*retry_after * 1000.0)));
  }
  double factor = 1.0;
  {
    std::lock_guard lock(rng_mu_);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    factor += config_.jitter * u(rng_);
  }
  const double base = static_cast<double>(config_.backoff_base.count());
  return std::chrono::milliseconds(static_cast<std::int64_t>(
      std::llround(base * std::ldexp(1.0, attempt - 1) * factor)));
}

ChatResponse RemoteBackend::Complete(const ChatRequest& request) {
  if (config_.api_key.empty()) throw AuthError("no API credential configured");
  const std::string body = EncodeChatBody(config_, request);
  Headers headers = {{config_.auth_header, config_.auth_prefix + config_.api_key},
                     {"Content-Type", "application/json"}};

  for (int attempt = 1;; ++attempt) {
    std::optional<double> retry_after;
    try {
      HttpResponse response;
      const auto start = Clock::now();
      {
        PermitGuard permit(in_flight_);
        response = transport_->Post(body, headers);
      }
      const double elapsed =
          std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      retry_after = response.retry_after;
      if (response.status == 401 || response.status == 403) {
        throw AuthError("endpoint rejected credential (HTTP " +
                        std::to_string(response.status) + ")");
      }
      if (response.status == 429) {
        throw RateLimitedError("rate limited (HTTP 429) after " +
                               std::to_string(attempt) + " attempt(s)");
      }
      if (response.status == 408 || response.status >= 500) {
        throw TransientError("HTTP " + std::to_string(response.status) + ": " +
                             Snippet(response.body));
      }
      if (response.status < 200 || response.status >= 300) {
        throw BackendError("HTTP " + std::to_string(response.status) + ": " +
                               Snippet(response.body),
                           false);
      }
      ChatResponse out = DecodeChatBody(response.body);
      out.latency_ms = elapsed;
      out.backend_id = id();
      return out;
    } catch (const BackendError& e) {
      if (!e.retryable() || attempt >= config_.max_attempts) throw;
    }
    sleeper_(BackoffDelay(attempt, retry_after));
  }
}

}  // namespace guinav::llm
