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

#include "guinav/cli/human_eval.h"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>

#include <spdlog/spdlog.h>

#include "guinav/agent.h"
#include "guinav/cli/commands.h"
#include "guinav/errors.h"

namespace guinav::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool ValidSessionId(const std::string& id) {
  if (id.empty() || id.size() > 128 || id[0] == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

ServiceResponse Problem(int status, const std::string& message) {
  return {status, json{{"error", message}}};
}

json JudgmentJson(const eval::Judgment& j) {
  return {{"sample_id", j.sample_id},
          {"score", j.score},
          {"note", j.note},
          {"timestamp", j.timestamp_ms}};
}

}  // namespace

std::optional<TaskSet> ParseTaskSet(std::string_view name) {
  if (name == "intended_action_description") return TaskSet::kIntendedActionDescription;
  if (name == "localized_action_execution") return TaskSet::kLocalizedActionExecution;
  return std::nullopt;
}

std::string_view ToString(TaskSet t) {
  switch (t) {
    case TaskSet::kIntendedActionDescription: return "intended_action_description";
    case TaskSet::kLocalizedActionExecution: return "localized_action_execution";
  }
  return "unknown";
}

std::vector<Sample> LoadSamples(const fs::path& run_dir) {
  const fs::path dir = run_dir / kTranscriptDir;
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Sample> samples;
  for (const fs::path& file : files) {
    const agent::AgentTranscript t = agent::LoadTranscript(file);
    for (const agent::TranscriptStep& s : t.steps) {
      Sample sample;
      sample.episode_id = t.episode_id;
      sample.step = s.index;
      sample.sample_id = t.episode_id + ":" + std::to_string(s.index);
      sample.instruction = t.instruction;
      sample.model_output = s.raw_model_text;
      sample.screenshot_url = "/media/dataset/" + s.screen_reference;
      const std::string tagged =
          std::string(kTaggedDir) + "/" + t.episode_id + "/" + std::to_string(s.index) + ".png";
      if (fs::exists(run_dir / tagged)) sample.tagged_url = "/media/run/" + tagged;
      samples.push_back(std::move(sample));
    }
  }
  return samples;
}

HumanEvalService::HumanEvalService(std::vector<Sample> samples, fs::path log_dir,
                                   TaskSet task_set, Clock clock)
    : samples_(std::move(samples)),
      log_dir_(std::move(log_dir)),
      task_set_(task_set),
      clock_(std::move(clock)) {
  if (!clock_) {
    clock_ = [] {
      return std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::system_clock::now().time_since_epoch())
          .count();
    };
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!index_.emplace(samples_[i].sample_id, i).second) {
      throw ContractViolation("duplicate sample id " + samples_[i].sample_id);
    }
  }
}

HumanEvalService::Session& HumanEvalService::OpenSession(const std::string& id) {
  Session* session;
  {
    std::lock_guard lock(sessions_mu_);
    auto& slot = sessions_[id];
    if (!slot) slot = std::make_unique<Session>();
    session = slot.get();
  }
  std::lock_guard lock(session->mu);
  if (!session->loaded) {
    std::ifstream in(log_dir_ / (id + ".jsonl"));
    std::string line;
    int lineno = 0;
    while (in && std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      try {
        const json j = json::parse(line);
        session->log.push_back({j.at("sample_id").get<std::string>(), j.at("score").get<int>(),
                                j.value("note", ""), j.at("timestamp").get<std::int64_t>()});
      } catch (const json::exception& e) {
        spdlog::warn("session {}: skipping judgment log line {}: {}", id, lineno, e.what());
      }
    }
    session->loaded = true;
  }
  return *session;
}

json HumanEvalService::MetricsJson(const Session& s) const {
  const auto latest = eval::LatestJudgments(s.log);
  json body = {{"total", samples_.size()},
               {"judged", latest.size()},
               {"remaining", samples_.size() - std::min(samples_.size(), latest.size())},
               {"correct", 0},
               {"human_accuracy", nullptr},
               {"fraction", nullptr}};
  if (!s.log.empty()) {
    const eval::HumanAccuracy acc = eval::ComputeHumanAccuracy(s.log);
    body["correct"] = acc.correct;
    body["human_accuracy"] = acc.display_percent;
    body["fraction"] = acc.fraction;
  }
  return body;
}

json HumanEvalService::SampleJson(const Sample& sample) const {
  json j = {{"sample_id", sample.sample_id},
            {"episode_id", sample.episode_id},
            {"step", sample.step},
            {"instruction", sample.instruction},
            {"model_output", sample.model_output},
            {"screenshot_url", sample.screenshot_url},
            {"tagged_url", nullptr},
            {"task_set", ToString(task_set_)}};
  if (sample.tagged_url) j["tagged_url"] = *sample.tagged_url;
  return j;
}

ServiceResponse HumanEvalService::Health() const {
  return {200, json{{"status", "ok"}, {"samples", samples_.size()}}};
}

ServiceResponse HumanEvalService::Next(const std::string& session_id) {
  if (!ValidSessionId(session_id)) return Problem(400, "invalid session id");
  Session& s = OpenSession(session_id);
  std::lock_guard lock(s.mu);
  const auto latest = eval::LatestJudgments(s.log);
  for (const Sample& sample : samples_) {
    if (!latest.count(sample.sample_id)) return {200, SampleJson(sample)};
  }
  return {204, nullptr};
}

ServiceResponse HumanEvalService::PostJudgment(const std::string& session_id,
                                               const std::string& body) {
  if (!ValidSessionId(session_id)) return Problem(400, "invalid session id");
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    return Problem(400, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) return Problem(400, "judgment must be a JSON object");
  if (!doc.contains("sample_id") || !doc["sample_id"].is_string()) {
    return Problem(422, "sample_id must be a string");
  }
  eval::Judgment j;
  j.sample_id = doc["sample_id"].get<std::string>();
  if (!index_.count(j.sample_id)) return Problem(404, "unknown sample " + j.sample_id);
  const json& score = doc.contains("score") ? doc["score"] : json();
  if (!score.is_number_integer() || (score.get<long long>() != 0 && score.get<long long>() != 1)) {
    return Problem(422, "score must be 0 or 1");
  }
  j.score = score.get<int>();
  if (doc.contains("note") && !doc["note"].is_null()) {
    if (!doc["note"].is_string()) return Problem(422, "note must be a string");
    j.note = doc["note"].get<std::string>();
  }
  if (doc.contains("timestamp") && !doc["timestamp"].is_null()) {
    if (!doc["timestamp"].is_number_integer()) return Problem(422, "timestamp must be an integer");
    j.timestamp_ms = doc["timestamp"].get<std::int64_t>();
  } else {
    j.timestamp_ms = clock_();
  }

  Session& s = OpenSession(session_id);
  std::lock_guard lock(s.mu);
  const bool duplicate = std::any_of(s.log.begin(), s.log.end(), [&](const eval::Judgment& o) {
    return o.sample_id == j.sample_id && o.timestamp_ms == j.timestamp_ms;
  });
  if (!duplicate) {
    fs::create_directories(log_dir_);
    std::ofstream out(log_dir_ / (session_id + ".jsonl"), std::ios::app);
    if (!out) return Problem(500, "cannot append to judgment log");
    out << JudgmentJson(j).dump() << '\n';
    out.flush();
    if (!out) return Problem(500, "cannot append to judgment log");
    s.log.push_back(j);
  }
  return {200, json{{"sample_id", j.sample_id},
                    {"accepted", true},
                    {"duplicate", duplicate},
                    {"metrics", MetricsJson(s)}}};
}

ServiceResponse HumanEvalService::Metrics(const std::string& session_id) {
  if (!ValidSessionId(session_id)) return Problem(400, "invalid session id");
  Session& s = OpenSession(session_id);
  std::lock_guard lock(s.mu);
  json body = MetricsJson(s);
  body["session"] = session_id;
  return {200, body};
}

void BindRoutes(httplib::Server& server, HumanEvalService& service,
                const ServeOptions& options) {
  auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    if (!r.body.is_null()) res.set_content(r.body.dump(), "application/json");
  };
  if (options.token) {
    const std::string token = *options.token;
    server.set_pre_routing_handler([token](const httplib::Request& req, httplib::Response& res) {
      if (req.path.rfind("/api/session/", 0) == 0 &&
          req.get_header_value("X-Session-Token") != token) {
        res.status = 401;
        res.set_content(json{{"error", "missing or wrong session token"}}.dump(),
                        "application/json");
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });
  }
  server.Get("/api/health", [&service, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service.Health());
  });
  server.Get(R"(/api/session/([^/]+)/next)",
             [&service, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, service.Next(req.matches[1]));
             });
  server.Post(R"(/api/session/([^/]+)/judgment)",
              [&service, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, service.PostJudgment(req.matches[1], req.body));
              });
  server.Get(R"(/api/session/([^/]+)/metrics)",
             [&service, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, service.Metrics(req.matches[1]));
             });
  if (!options.dataset.empty()) server.set_mount_point("/media/dataset", options.dataset.string());
  server.set_mount_point("/media/run", options.run_dir.string());
  if (options.ui_dir) server.set_mount_point("/", options.ui_dir->string());
}

int CmdServe(const ServeOptions& options) {
  std::vector<Sample> samples = LoadSamples(options.run_dir);
  if (samples.empty()) {
    throw UsageError("run directory " + options.run_dir.string() + " has no transcripts");
  }
  HumanEvalService service(std::move(samples), options.run_dir / "judgments",
                           options.task_set);
  httplib::Server server;
  BindRoutes(server, service, options);
  spdlog::info("serving {} samples on http://{}:{}", service.sample_count(), options.host,
               options.port);
  if (!server.listen(options.host, options.port)) {
    spdlog::error("cannot listen on {}:{}", options.host, options.port);
    return 1;
  }
  return 0;
}

}  // namespace guinav::cli
