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

// The only translation unit that includes cpp-httplib on the client side.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "guinav/remote_backend.h"

namespace guinav::llm {
namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl SplitUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ContractViolation("endpoint must be an absolute URL: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport : public HttpTransport {
 public:
  HttplibTransport(const std::string& endpoint, std::chrono::seconds timeout)
      : url_(SplitUrl(endpoint)), timeout_(timeout) {}

  HttpResponse Post(const std::string& body, const Headers& headers) override {
    // httplib::Client is not thread-safe; one per call keeps Post reentrant.
    httplib::Client client(url_.origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    httplib::Headers h;
    std::string content_type = "application/json";
    for (const auto& [k, v] : headers) {
      if (k == "Content-Type") {
        content_type = v;
      } else {
        h.emplace(k, v);
      }
    }
    auto result = client.Post(url_.path, h, body, content_type);
    if (!result) {
      throw TransientError("request to " + url_.origin + " failed: " +
                           httplib::to_string(result.error()));
    }
    HttpResponse out;
    out.status = result->status;
    out.body = result->body;
    if (result->has_header("Retry-After")) {
      try {
        out.retry_after = std::stod(result->get_header_value("Retry-After"));
      } catch (const std::exception&) {
        // HTTP-date form; fall back to exponential backoff.
      }
    }
    return out;
  }

 private:
  ParsedUrl url_;
  std::chrono::seconds timeout_;
};

}  // namespace

std::unique_ptr<HttpTransport> MakeHttpTransport(const std::string& endpoint,
                                                 std::chrono::seconds timeout) {
  return std::make_unique<HttplibTransport>(endpoint, timeout);
}

}  // namespace guinav::llm
