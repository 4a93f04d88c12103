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

#ifndef GUINAV_CLI_HUMAN_EVAL_H_
#define GUINAV_CLI_HUMAN_EVAL_H_

// Human evaluation service: annotators judge model outputs 0/1 per sample.
//
//   GET  /api/health
//   GET  /api/session/{id}/next      200 sample, or 204 when exhausted
//   POST /api/session/{id}/judgment  {sample_id, score: 0|1, note?, timestamp?}
//   GET  /api/session/{id}/metrics
//
// Judgments are appended to <run_dir>/judgments/<id>.jsonl and replayed on
// start-up.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guinav/evaluator.h"

namespace httplib {
class Server;
}

namespace guinav::cli {

enum class TaskSet { kIntendedActionDescription, kLocalizedActionExecution };

std::optional<TaskSet> ParseTaskSet(std::string_view name);
std::string_view ToString(TaskSet t);

struct Sample {
  std::string sample_id;  // "<episode_id>:<step>"
  std::string episode_id;
  int step = 0;
  std::string instruction;
  std::string model_output;
  std::string screenshot_url;
  std::optional<std::string> tagged_url;
};

// One sample per transcript step of the run, ordered by episode id and step.
std::vector<Sample> LoadSamples(const std::filesystem::path& run_dir);

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;  // null for empty responses
};

class HumanEvalService {
 public:
  using Clock = std::function<std::int64_t()>;

  HumanEvalService(std::vector<Sample> samples, std::filesystem::path log_dir,
                   TaskSet task_set, Clock clock = nullptr);

  ServiceResponse Health() const;
  ServiceResponse Next(const std::string& session);
  ServiceResponse PostJudgment(const std::string& session, const std::string& body);
  ServiceResponse Metrics(const std::string& session);

  std::size_t sample_count() const { return samples_.size(); }

 private:
  struct Session {
    std::mutex mu;
    std::vector<eval::Judgment> log;
    bool loaded = false;
  };

  Session& OpenSession(const std::string& id);
  nlohmann::json MetricsJson(const Session& s) const;
  nlohmann::json SampleJson(const Sample& sample) const;

  std::vector<Sample> samples_;
  std::map<std::string, std::size_t> index_;
  std::filesystem::path log_dir_;
  TaskSet task_set_;
  Clock clock_;
  std::mutex sessions_mu_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
};

struct ServeOptions {
  std::filesystem::path dataset;
  std::filesystem::path run_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  TaskSet task_set = TaskSet::kLocalizedActionExecution;
  std::optional<std::filesystem::path> ui_dir;
  // When set, /api/session/* requires header X-Session-Token.
  std::optional<std::string> token;
};

// Registers the API routes and static mounts on server.
void BindRoutes(httplib::Server& server, HumanEvalService& service,
                const ServeOptions& options);

// Blocks serving until the process is stopped.
int CmdServe(const ServeOptions& options);

}  // namespace guinav::cli

#endif  // GUINAV_CLI_HUMAN_EVAL_H_
