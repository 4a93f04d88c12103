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

#include <httplib.h>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <thread>

#include <nlohmann/json.hpp>

#include "guinav/llm.h"
#include "guinav/remote_backend.h"
#include "guinav/replay.h"
#include "guinav/scripted_backend.h"
#include "test_support.h"

namespace guinav::llm {
namespace {

using nlohmann::json;
using ::testing::HasSubstr;

ChatRequest Request(std::string user, int images = 0) {
  ChatRequest r;
  r.system_text = "sys";
  r.user_text = std::move(user);
  for (int i = 0; i < images; ++i) {
    r.images.push_back({"raw", std::make_shared<const Bytes>(Bytes{1, 2, 3,
                                                                   static_cast<std::uint8_t>(i)})});
  }
  return r;
}

std::string OkBody(const std::string& text) {
  return json{{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}},
              {"usage", {{"prompt_tokens", 10}, {"completion_tokens", 3}}}}
      .dump();
}

TEST(RequestDigestTest, SensitiveToContentNotLabels) {
  ChatRequest a = Request("hello", 1);
  ChatRequest b = a;
  b.images[0].label = "tagged";
  EXPECT_EQ(RequestDigest(a), RequestDigest(b));
  b.user_text = "hello!";
  EXPECT_NE(RequestDigest(a), RequestDigest(b));
  ChatRequest c = a;
  c.decode.temperature = 0.5;
  EXPECT_NE(RequestDigest(a), RequestDigest(c));
  // Length framing keeps field boundaries apart.
  ChatRequest d = a, e = a;
  d.system_text = "ab";
  d.user_text = "c";
  e.system_text = "a";
  e.user_text = "bc";
  EXPECT_NE(RequestDigest(d), RequestDigest(e));
  EXPECT_EQ(RequestDigest(a).size(), 64u);
}

TEST(ScriptedBackendTest, ConsumesFirstMatchingEntry) {
  ScriptedBackend backend({{std::string("summary"), std::nullopt, "S1"},
                           {std::nullopt, 2u, "A1"},
                           {std::nullopt, std::nullopt, "any"}});
  EXPECT_EQ(backend.Complete(Request("act", 2)).text, "A1");
  EXPECT_EQ(backend.Complete(Request("write a summary")).text, "S1");
  EXPECT_EQ(backend.Complete(Request("x")).text, "any");
  EXPECT_EQ(backend.calls(), 3u);
  EXPECT_EQ(backend.remaining(), 0u);
  EXPECT_THROW(backend.Complete(Request("x")), ScriptExhaustedError);
}

TEST(ScriptedBackendTest, MismatchWhenNoEntryAccepts) {
  ScriptedBackend backend({{std::string("summary"), std::nullopt, "S1"}});
  EXPECT_THROW(backend.Complete(Request("act")), ScriptMismatchError);
  EXPECT_EQ(backend.remaining(), 1u);
}

TEST(ScriptedBackendTest, LoadsJsonl) {
  guinav::testing::ScratchDir dir;
  guinav::testing::WriteText(dir / "s.jsonl",
                             "{\"text\": \"one\"}\n\n{\"match\": \"b\", \"images\": 0, "
                             "\"text\": \"two\"}\n");
  const auto script = ScriptedBackend::LoadScript(dir / "s.jsonl");
  ASSERT_EQ(script.size(), 2u);
  EXPECT_EQ(script[1].user_text_contains, "b");
  EXPECT_EQ(script[1].image_count, 0u);
  guinav::testing::WriteText(dir / "bad.jsonl", "{\"match\": 1}\n");
  EXPECT_THROW(ScriptedBackend::LoadScript(dir / "bad.jsonl"), Error);
}

TEST(ReplayTest, RecordThenReplayIdentical) {
  guinav::testing::ScratchDir dir;
  auto scripted = std::make_shared<ScriptedBackend>(std::vector<ScriptEntry>{
      {std::nullopt, std::nullopt, "r1"},
      {std::nullopt, std::nullopt, "r2"},
      {std::nullopt, std::nullopt, "r3"}});
  std::vector<ChatResponse> recorded;
  {
    auto rec = OpenSession(SessionMode::kRecord, dir / "session.jsonl", scripted);
    recorded.push_back(rec->Complete(Request("a", 1)));
    recorded.push_back(rec->Complete(Request("b")));
    recorded.push_back(rec->Complete(Request("a", 1)));
  }
  auto replay = OpenSession(SessionMode::kReplay, dir / "session.jsonl");
  EXPECT_EQ(replay->Complete(Request("a", 1)), recorded[0]);
  EXPECT_EQ(replay->Complete(Request("b")), recorded[1]);
  EXPECT_EQ(replay->Complete(Request("a", 1)), recorded[2]);
  // Exhausted duplicates repeat the last response.
  EXPECT_EQ(replay->Complete(Request("a", 1)).text, "r3");
}

TEST(ReplayTest, MissReportsNearestRecording) {
  guinav::testing::ScratchDir dir;
  auto scripted = std::make_shared<ScriptedBackend>(
      std::vector<ScriptEntry>{{std::nullopt, std::nullopt, "r1"},
                               {std::nullopt, std::nullopt, "r2"}});
  std::string near_digest;
  {
    RecordingBackend rec(scripted, dir / "s.jsonl");
    rec.Complete(Request("open the settings app"));
    rec.Complete(Request("completely different text here"));
    near_digest = RequestDigest(Request("open the settings app"));
  }
  ReplayBackend replay(dir / "s.jsonl");
  EXPECT_EQ(replay.size(), 2u);
  try {
    replay.Complete(Request("open the setting app"));
    FAIL() << "expected ReplayMissError";
  } catch (const ReplayMissError& e) {
    EXPECT_EQ(e.nearest_digest(), near_digest);
    EXPECT_FALSE(e.retryable());
    EXPECT_THAT(e.what(), HasSubstr("open the settings app"));
  }
}

class FakeTransport : public HttpTransport {
 public:
  explicit FakeTransport(std::vector<HttpResponse> responses) : responses_(std::move(responses)) {}

  HttpResponse Post(const std::string& body, const Headers& headers) override {
    const int now = ++in_flight_;
    int seen = max_in_flight_.load();
    while (now > seen && !max_in_flight_.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_));
    --in_flight_;
    std::lock_guard lock(mu_);
    bodies_.push_back(body);
    headers_ = headers;
    const std::size_t i = calls_++;
    if (i < responses_.size()) return responses_[i];
    return {200, OkBody("default"), std::nullopt};
  }

  int delay_ms_ = 0;
  std::mutex mu_;
  std::size_t calls_ = 0;
  std::vector<std::string> bodies_;
  Headers headers_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};

 private:
  std::vector<HttpResponse> responses_;
};

RemoteConfig TestConfig() {
  RemoteConfig c;
  c.endpoint = "http://127.0.0.1:1/v1/chat/completions";
  c.model = "test-model";
  c.api_key = "k-123";
  c.backoff_base = std::chrono::milliseconds(100);
  return c;
}

struct SleepLog {
  std::vector<std::chrono::milliseconds> sleeps;
  Sleeper sleeper() {
    return [this](std::chrono::milliseconds d) { sleeps.push_back(d); };
  }
};

TEST(RemoteBackendTest, SendsChatJsonWithImagesAndAuth) {
  auto transport = std::make_unique<FakeTransport>(
      std::vector<HttpResponse>{{200, OkBody("Action: Press, Key: Back"), std::nullopt}});
  FakeTransport* t = transport.get();
  SleepLog log;
  RemoteBackend backend(TestConfig(), std::move(transport), log.sleeper());
  const ChatResponse r = backend.Complete(Request("hi", 2));
  EXPECT_EQ(r.text, "Action: Press, Key: Back");
  EXPECT_EQ(r.usage.prompt_tokens, 10);
  EXPECT_EQ(r.backend_id, "remote:test-model");
  ASSERT_EQ(t->bodies_.size(), 1u);
  const json body = json::parse(t->bodies_[0]);
  EXPECT_EQ(body["model"], "test-model");
  EXPECT_EQ(body["messages"][0]["role"], "system");
  const json& content = body["messages"][1]["content"];
  ASSERT_EQ(content.size(), 3u);
  EXPECT_EQ(content[1]["image_url"]["url"], "data:image/png;base64,AQIDAA==");
  EXPECT_THAT(t->headers_, ::testing::Contains(std::pair<std::string, std::string>(
                               "Authorization", "Bearer k-123")));
}

TEST(RemoteBackendTest, AuthFailureIsNotRetried) {
  auto transport = std::make_unique<FakeTransport>(
      std::vector<HttpResponse>{{401, "nope", std::nullopt}});
  FakeTransport* t = transport.get();
  SleepLog log;
  RemoteBackend backend(TestConfig(), std::move(transport), log.sleeper());
  EXPECT_THROW(backend.Complete(Request("x")), AuthError);
  EXPECT_EQ(t->calls_, 1u);
  EXPECT_TRUE(log.sleeps.empty());
}

TEST(RemoteBackendTest, RetriesTransientThenSucceeds) {
  auto transport = std::make_unique<FakeTransport>(std::vector<HttpResponse>{
      {503, "busy", std::nullopt}, {429, "slow down", 2.5}, {200, OkBody("ok"), std::nullopt}});
  FakeTransport* t = transport.get();
  SleepLog log;
  RemoteBackend backend(TestConfig(), std::move(transport), log.sleeper());
  EXPECT_EQ(backend.Complete(Request("x")).text, "ok");
  EXPECT_EQ(t->calls_, 3u);
  ASSERT_EQ(log.sleeps.size(), 2u);
  EXPECT_GE(log.sleeps[0].count(), 75);
  EXPECT_LE(log.sleeps[0].count(), 125);
  EXPECT_EQ(log.sleeps[1].count(), 2500);
}

TEST(RemoteBackendTest, RetryBudgetExhausted) {
  std::vector<HttpResponse> errors(10, HttpResponse{500, "boom", std::nullopt});
  auto transport = std::make_unique<FakeTransport>(errors);
  FakeTransport* t = transport.get();
  SleepLog log;
  RemoteBackend backend(TestConfig(), std::move(transport), log.sleeper());
  EXPECT_THROW(backend.Complete(Request("x")), TransientError);
  EXPECT_EQ(t->calls_, 5u);
  EXPECT_EQ(log.sleeps.size(), 4u);
}

TEST(RemoteBackendTest, ClientErrorNotRetried) {
  auto transport = std::make_unique<FakeTransport>(
      std::vector<HttpResponse>{{400, "bad request", std::nullopt}});
  FakeTransport* t = transport.get();
  RemoteBackend backend(TestConfig(), std::move(transport), SleepLog().sleeper());
  try {
    backend.Complete(Request("x"));
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_FALSE(e.retryable());
  }
  EXPECT_EQ(t->calls_, 1u);
}

TEST(RemoteBackendTest, MalformedBodyRejected) {
  auto transport = std::make_unique<FakeTransport>(
      std::vector<HttpResponse>{{200, "{\"choices\": []}", std::nullopt}});
  RemoteBackend backend(TestConfig(), std::move(transport), SleepLog().sleeper());
  EXPECT_THROW(backend.Complete(Request("x")), MalformedResponseError);
}

TEST(RemoteBackendTest, BackoffGrowsExponentiallyWithinJitter) {
  RemoteBackend backend(TestConfig(), std::make_unique<FakeTransport>(std::vector<HttpResponse>{}),
                        SleepLog().sleeper());
  for (int attempt = 1; attempt <= 4; ++attempt) {
    const double nominal = 100.0 * (1 << (attempt - 1));
    for (int i = 0; i < 50; ++i) {
      const auto d = backend.BackoffDelay(attempt, std::nullopt).count();
      EXPECT_GE(d, std::floor(nominal * 0.75));
      EXPECT_LE(d, std::ceil(nominal * 1.25));
    }
  }
  EXPECT_EQ(backend.BackoffDelay(1, 0.2).count(), 200);
}

TEST(RemoteBackendTest, InFlightBounded) {
  auto transport = std::make_unique<FakeTransport>(std::vector<HttpResponse>{});
  FakeTransport* t = transport.get();
  t->delay_ms_ = 20;
  RemoteConfig config = TestConfig();
  config.max_in_flight = 2;
  RemoteBackend backend(config, std::move(transport), SleepLog().sleeper());
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&backend] { backend.Complete(Request("x")); });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(t->calls_, 8u);
  EXPECT_LE(t->max_in_flight_.load(), 2);
  EXPECT_GE(t->max_in_flight_.load(), 1);
}

TEST(RemoteBackendTest, MissingCredential) {
  RemoteConfig config = TestConfig();
  config.api_key.clear();
  RemoteBackend backend(config, std::make_unique<FakeTransport>(std::vector<HttpResponse>{}),
                        SleepLog().sleeper());
  EXPECT_THROW(backend.Complete(Request("x")), AuthError);
  ::unsetenv("GUINAV_TEST_UNSET_KEY");
  EXPECT_THROW(ApiKeyFromEnv("GUINAV_TEST_UNSET_KEY"), AuthError);
  ::setenv("GUINAV_TEST_SET_KEY", "abc", 1);
  EXPECT_EQ(ApiKeyFromEnv("GUINAV_TEST_SET_KEY"), "abc");
}

TEST(Base64Test, KnownVectors) {
  EXPECT_EQ(Base64Encode({}), "");
  EXPECT_EQ(Base64Encode({'f'}), "Zg==");
  EXPECT_EQ(Base64Encode({'f', 'o', 'o', 'b', 'a', 'r'}), "Zm9vYmFy");
}

TEST(HttpTransportTest, TalksToLocalServer) {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/v1/chat", [&hits](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    if (req.get_header_value("X-Key") != "Token s3cret") {
      res.status = 401;
      return;
    }
    if (hits == 1) {
      res.status = 503;
      res.set_header("Retry-After", "0");
      return;
    }
    res.set_content(OkBody("from server"), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&server] { server.listen_after_bind(); });
  server.wait_until_ready();

  RemoteConfig config = TestConfig();
  config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat";
  config.auth_header = "X-Key";
  config.auth_prefix = "Token ";
  config.api_key = "s3cret";
  config.timeout = std::chrono::seconds(5);
  SleepLog log;
  RemoteBackend backend(config, MakeHttpTransport(config.endpoint, config.timeout),
                        log.sleeper());
  EXPECT_EQ(backend.Complete(Request("x")).text, "from server");
  EXPECT_EQ(hits.load(), 2);
  ASSERT_EQ(log.sleeps.size(), 1u);
  EXPECT_EQ(log.sleeps[0].count(), 0);

  config.api_key = "wrong";
  RemoteBackend denied(config, MakeHttpTransport(config.endpoint, config.timeout),
                       log.sleeper());
  EXPECT_THROW(denied.Complete(Request("x")), AuthError);

  server.stop();
  th.join();

  RemoteBackend offline(config, MakeHttpTransport(config.endpoint, config.timeout),
                        log.sleeper());
  EXPECT_THROW(offline.Complete(Request("x")), TransientError);
}

}  // namespace
}  // namespace guinav::llm
