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

// guinav: tag screens, run agents, score runs and serve human evaluation.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

#include <spdlog/spdlog.h>

#include "guinav/cli/commands.h"
#include "guinav/cli/human_eval.h"
#include "guinav/dataset.h"
#include "guinav/llm.h"

namespace {

namespace fs = std::filesystem;
using namespace guinav;

template <typename T, typename Parse>
CLI::Validator EnumValidator(Parse parse, const std::string& choices) {
  return CLI::Validator(
      [parse, choices](std::string& value) -> std::string {
        if (!parse(value)) return "expected one of: " + choices;
        return {};
      },
      choices);
}

// Expands "--config FILE" into "--key=value" arguments for every key the
// command line does not already set. Lines are key=value; '#' starts a
// comment.
std::vector<std::string> ExpandConfig(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (!file) return args;
  std::ifstream in(*file);
  if (!in) throw CLI::FileError::Missing(*file);
  auto given = [&args](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = CLI::detail::trim_copy(line.substr(0, eq));
    std::string value = CLI::detail::trim_copy(line.substr(eq + 1));
    if (key.empty() || given(key)) continue;
    extra.push_back("--" + key + "=" + value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GUI navigation agent toolkit"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");
  std::string config_file;
  app.add_option("--config", config_file,
                 "key=value defaults for the subcommand; command-line flags win");

  // tag
  cli::TagOptions tag;
  double font_scale = 0.0;
  CLI::App* tag_cmd = app.add_subcommand("tag", "Draw Set-of-Mark tags on a screenshot");
  tag_cmd->add_option("--image", tag.image, "screenshot PNG")->required()->check(CLI::ExistingFile);
  tag_cmd->add_option("--elements", tag.elements, "elements JSON")->required()->check(CLI::ExistingFile);
  tag_cmd->add_option("--out", tag.out_dir, "output directory")->required();
  tag_cmd->add_option("--style", tag.style, "by-side | red | center")->capture_default_str();
  auto* fs_opt = tag_cmd->add_option("--font-scale", font_scale, "glyph height / image height")
                     ->check(CLI::Range(0.001, 0.5));

  // run
  cli::RunConfig run;
  std::string condition = "image-only", variant = "baseline", backend = "scripted", split = "test";
  std::string prompt_dir;
  CLI::App* run_cmd = app.add_subcommand("run", "Roll out the agent over dataset episodes");
  run_cmd->add_option("--dataset", run.dataset, "dataset root")->required()->check(CLI::ExistingDirectory);
  run_cmd->add_option("--out", run.out_dir, "run directory")->required();
  run_cmd->add_option("--label", run.label, "row name in result tables");
  run_cmd->add_option("-n,--n", run.n, "episodes to sample (0 = whole split)");
  run_cmd->add_option("--seed", run.seed, "sampling seed");
  run_cmd->add_flag("--stratified", run.stratify, "balance the five categories");
  run_cmd->add_option("--split", split, "test | train | all")
      ->check(EnumValidator<data::Split>(data::ParseSplit, "test, train, all"));
  run_cmd->add_option("--episode", run.episodes, "explicit episode id (repeatable)");
  run_cmd->add_option("--condition", condition, "image-only | +text | +history")
      ->check(EnumValidator<agent::Condition>(agent::ParseCondition, "image-only, +text, +history"));
  run_cmd->add_option("--prompt", variant, "baseline | think | detail")
      ->check(EnumValidator<agent::PromptVariantKind>(agent::ParsePromptVariant,
                                                      "baseline, think, detail"));
  run_cmd->add_option("--prompt-dir", prompt_dir, "directory overriding prompt templates")
      ->check(CLI::ExistingDirectory);
  run_cmd->add_option("--tag-style", run.tag_style, "by-side | red | center");
  run_cmd->add_option("--max-steps", run.max_steps, "step budget per episode");
  run_cmd->add_option("--temperature", run.decode.temperature, "sampling temperature");
  run_cmd->add_option("--max-tokens", run.decode.max_tokens, "completion token limit");
  run_cmd->add_option("--backend", backend, "remote | scripted | replay | gold")
      ->check(EnumValidator<cli::BackendKind>(cli::ParseBackendKind,
                                              "remote, scripted, replay, gold"));
  run_cmd->add_option("--script", run.script, "scripted backend JSONL");
  run_cmd->add_option("--session", run.session, "session JSONL to replay");
  run_cmd->add_option("--endpoint", run.endpoint, "chat-completion URL");
  run_cmd->add_option("--model", run.model, "model name sent to the endpoint");
  run_cmd->add_option("--api-key-env", run.api_key_env, "environment variable holding the key");
  run_cmd->add_option("--auth-header", run.auth_header, "header carrying the key");
  run_cmd->add_option("--max-in-flight", run.max_in_flight, "concurrent remote requests");
  run_cmd->add_option("--parallel", run.parallel, "episodes rolled out concurrently");
  bool no_tagged = false;
  run_cmd->add_flag("--no-tagged", no_tagged, "do not save tagged screenshots");

  // eval
  cli::EvalOptions ev;
  std::string eval_dataset, eval_label;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score a run directory");
  eval_cmd->add_option("run_dir", ev.run_dir, "run directory")->required();
  eval_cmd->add_option("--dataset", eval_dataset, "dataset root (default: from run.json)");
  eval_cmd->add_option("--click-threshold", ev.rule.click_distance_threshold,
                       "click distance threshold")
      ->capture_default_str();
  eval_cmd->add_option("--label", eval_label, "row name in the table");

  // serve
  cli::ServeOptions serve;
  std::string task_set = "localized_action_execution", ui_dir, token;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Serve the human-evaluation API");
  serve_cmd->add_option("--dataset", serve.dataset, "dataset root")->required();
  serve_cmd->add_option("--run", serve.run_dir, "run directory")->required();
  serve_cmd->add_option("--host", serve.host, "bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "bind port")->capture_default_str();
  serve_cmd->add_option("--task-set", task_set,
                        "intended_action_description | localized_action_execution")
      ->check(EnumValidator<cli::TaskSet>(cli::ParseTaskSet,
                                          "intended_action_description, localized_action_execution"));
  serve_cmd->add_option("--ui-dir", ui_dir, "static UI bundle")->check(CLI::ExistingDirectory);
  serve_cmd->add_option("--token", token, "shared session token");

  // validate
  fs::path validate_path;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a dataset or episode file");
  validate_cmd->add_option("path", validate_path, "dataset root or episode JSON")->required();
  bool list_rules = false;
  validate_cmd->add_flag("--rules", list_rules, "print the rule table as well");

  // sample
  fs::path sample_dataset;
  std::size_t sample_n = 0;
  std::uint64_t sample_seed = 0;
  bool sample_stratified = false;
  std::string sample_split = "test";
  CLI::App* sample_cmd = app.add_subcommand("sample", "Print a seeded sample of episode ids");
  sample_cmd->add_option("--dataset", sample_dataset, "dataset root")->required();
  sample_cmd->add_option("-n,--n", sample_n, "episodes")->required();
  sample_cmd->add_option("--seed", sample_seed, "seed");
  sample_cmd->add_flag("--stratified", sample_stratified, "balance the five categories");
  sample_cmd->add_option("--split", sample_split, "test | train | all")
      ->check(EnumValidator<data::Split>(data::ParseSplit, "test, train, all"));

  try {
    std::vector<std::string> args = ExpandConfig(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*tag_cmd) {
      if (*fs_opt) tag.font_scale = font_scale;
      const cli::TagResult r = cli::CmdTag(tag);
      std::cout << r.tagged_png.string() << "\n" << r.tag_map.string() << "\n";
      for (const auto& [a, b] : r.collisions) {
        spdlog::warn("tags {} and {} overlap", a, b);
      }
      return 0;
    }
    if (*run_cmd) {
      run.condition = *agent::ParseCondition(condition);
      run.prompt_variant = *agent::ParsePromptVariant(variant);
      run.backend = *cli::ParseBackendKind(backend);
      run.split = *data::ParseSplit(split);
      run.save_tagged = !no_tagged;
      if (!prompt_dir.empty()) run.prompt_dir = prompt_dir;
      const cli::RunSummary s = cli::CmdRun(run);
      std::cout << s.run_dir.string() << ": " << s.episode_ids.size() - s.failures.size() << "/"
                << s.episode_ids.size() << " episodes\n";
      for (const auto& [id, msg] : s.failures) std::cerr << "failed " << id << ": " << msg << "\n";
      return s.exit_code;
    }
    if (*eval_cmd) {
      if (!eval_dataset.empty()) ev.dataset = eval_dataset;
      if (!eval_label.empty()) ev.label = eval_label;
      const cli::EvalResult r = cli::CmdEval(ev);
      std::cout << r.markdown;
      return 0;
    }
    if (*serve_cmd) {
      serve.task_set = *cli::ParseTaskSet(task_set);
      if (!ui_dir.empty()) serve.ui_dir = ui_dir;
      if (!token.empty()) serve.token = token;
      return cli::CmdServe(serve);
    }
    if (*validate_cmd) {
      if (list_rules) {
        for (const data::RuleInfo& r : data::ValidationRules()) {
          std::cout << r.id << "\t" << r.description << "\n";
        }
      }
      const auto violations = data::Validate(validate_path);
      for (const data::Violation& v : violations) {
        std::cout << v.file << v.pointer << "\t" << v.rule << "\t" << v.message << "\n";
      }
      if (violations.empty()) std::cout << "ok\n";
      return violations.empty() ? 0 : 1;
    }
    if (*sample_cmd) {
      const data::Dataset ds = data::Dataset::Open(sample_dataset);
      for (const std::string& id : data::Sample(ds.manifest(), sample_n, sample_seed,
                                                sample_stratified, *data::ParseSplit(sample_split))) {
        std::cout << id << "\n";
      }
      return 0;
    }
  } catch (const llm::AuthError& e) {
    std::cerr << "authentication: " << e.what() << "\n";
    return 4;
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
