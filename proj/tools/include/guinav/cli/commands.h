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

#ifndef GUINAV_CLI_COMMANDS_H_
#define GUINAV_CLI_COMMANDS_H_

// Library form of the guinav subcommands. The executable only parses flags
// and calls these.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "guinav/agent.h"
#include "guinav/dataset.h"
#include "guinav/evaluator.h"
#include "guinav/llm.h"
#include "guinav/remote_backend.h"

namespace guinav::cli {

// Run directory layout.
inline constexpr char kRunFile[] = "run.json";
inline constexpr char kPredictionsFile[] = "predictions.jsonl";
inline constexpr char kSessionFile[] = "session.jsonl";
inline constexpr char kTranscriptDir[] = "transcripts";
inline constexpr char kTaggedDir[] = "tagged";

class UsageError : public Error {
 public:
  using Error::Error;
};

struct TagOptions {
  std::filesystem::path image;
  // JSON array of elements, or an object with an "elements" array.
  std::filesystem::path elements;
  std::filesystem::path out_dir;
  std::string style = "center";
  std::optional<double> font_scale;
};

struct TagResult {
  std::filesystem::path tagged_png;
  std::filesystem::path tag_map;
  std::vector<std::pair<int, int>> collisions;
};

// Writes tagged.png and tagmap.json into out_dir.
TagResult CmdTag(const TagOptions& options);

enum class BackendKind { kRemote, kScripted, kReplay, kGold };

std::optional<BackendKind> ParseBackendKind(std::string_view name);
std::string_view ToString(BackendKind kind);

struct RunConfig {
  std::filesystem::path dataset;
  std::filesystem::path out_dir;
  std::string label;  // table row name; defaults to the run dir name

  // Sampling. n == 0 takes the whole split.
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool stratify = false;
  data::Split split = data::Split::kTest;
  std::vector<std::string> episodes;  // explicit ids override sampling

  agent::Condition condition = agent::Condition::kImageOnly;
  agent::PromptVariantKind prompt_variant = agent::PromptVariantKind::kBaseline;
  std::string tag_style = "center";
  int max_steps = 10;
  llm::DecodeParams decode;
  std::optional<std::filesystem::path> prompt_dir;

  BackendKind backend = BackendKind::kScripted;
  std::filesystem::path script;   // scripted
  std::filesystem::path session;  // replay input
  std::string endpoint;           // remote
  std::string model;
  std::string api_key_env = llm::kDefaultApiKeyEnv;
  std::string auth_header = "Authorization";
  int max_in_flight = 4;

  int parallel = 1;
  bool save_tagged = true;
};

struct RunSummary {
  std::filesystem::path run_dir;
  std::vector<std::string> episode_ids;
  // Episode id -> error message for episodes stopped by a backend error.
  std::map<std::string, std::string> failures;
  int exit_code = 0;
};

// Rolls out every selected episode and writes run.json, transcripts/,
// predictions.jsonl, session.jsonl (except in replay mode) and tagged/.
// Throws for configuration errors; backend errors are summarized.
RunSummary CmdRun(const RunConfig& config);

struct EvalOptions {
  std::filesystem::path run_dir;
  // Defaults to the dataset recorded in run.json.
  std::optional<std::filesystem::path> dataset;
  eval::MatchRule rule;
  std::optional<std::string> label;
};

struct EvalResult {
  eval::ScoreReport report;
  std::string label;
  std::string markdown;
  std::string csv;
};

// Scores predictions.jsonl and writes report.json, verdicts.jsonl,
// triage.json, table.md and table.csv into the run directory. Throws
// UsageError when the run has no predictions.
EvalResult CmdEval(const EvalOptions& options);

// Byte form of report.json.
std::string EncodeReport(const eval::ScoreReport& report);

}  // namespace guinav::cli

#endif  // GUINAV_CLI_COMMANDS_H_
