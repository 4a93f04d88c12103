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

#include "guinav/cli/commands.h"

#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "guinav/action_parser.h"
#include "guinav/codec.h"
#include "guinav/image.h"
#include "guinav/remote_backend.h"
#include "guinav/replay.h"
#include "guinav/scripted_backend.h"
#include "guinav/som.h"

namespace guinav::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

som::TagStyle ResolveStyle(const std::string& name, std::optional<double> font_scale) {
  auto style = som::ParseTagStyle(name);
  if (!style) throw UsageError("unknown tag style '" + name + "' (by-side, red, center)");
  if (font_scale) style->font_scale = *font_scale;
  return *style;
}

void CheckEpisodeId(const std::string& id) {
  if (id.empty() || id.find('/') != std::string::npos || id == "." || id == "..") {
    throw UsageError("episode id '" + id + "' cannot be used as a file name");
  }
}

// Answers action prompts with the episode's gold actions and summaries with
// a running log. Used to smoke-test the pipeline end to end.
class GoldBackend : public llm::Backend {
 public:
  void Reset(const Episode& episode) {
    std::lock_guard lock(mu_);
    actions_.clear();
    for (const Step& s : episode.steps) actions_.push_back(s.gold_action);
    cursor_ = 0;
    log_.clear();
  }

  llm::ChatResponse Complete(const llm::ChatRequest& request) override {
    std::lock_guard lock(mu_);
    llm::ChatResponse response;
    response.backend_id = id();
    if (request.images.empty()) {
      if (!log_.empty()) log_ += " ";
      log_ += "Step " + std::to_string(cursor_) + ": " + last_ + ".";
      response.text = log_;
      return response;
    }
    if (cursor_ >= actions_.size()) {
      throw llm::ScriptExhaustedError("gold actions exhausted");
    }
    last_ = Describe(actions_[cursor_]);
    response.text = agent::FormatAction(actions_[cursor_++]);
    return response;
  }

  std::string id() const override { return "gold"; }

 private:
  std::mutex mu_;
  std::vector<Action> actions_;
  std::size_t cursor_ = 0;
  std::string last_;
  std::string log_;
};

std::vector<std::string> SelectEpisodes(const RunConfig& config, const data::Dataset& ds) {
  if (!config.episodes.empty()) return config.episodes;
  const data::Manifest& m = ds.manifest();
  if (config.n == 0) {
    switch (config.split) {
      case data::Split::kTest: return m.test;
      case data::Split::kTrain: return m.train;
      case data::Split::kAll: return ds.ids();
    }
  }
  return data::Sample(m, config.n, config.seed, config.stratify, config.split);
}

json RunJson(const RunConfig& config, const std::string& label,
             const std::vector<std::string>& ids,
             const std::map<std::string, std::string>& failures) {
  return {{"label", label},
          {"dataset", fs::absolute(config.dataset).lexically_normal().string()},
          {"episodes", ids},
          {"sample", {{"n", config.n}, {"seed", config.seed}, {"stratify", config.stratify}}},
          {"condition", agent::ToString(config.condition)},
          {"prompt_variant", agent::ToString(config.prompt_variant)},
          {"tag_style", config.tag_style},
          {"max_steps", config.max_steps},
          {"temperature", config.decode.temperature},
          {"max_tokens", config.decode.max_tokens},
          {"backend", ToString(config.backend)},
          {"failures", failures}};
}

}  // namespace

std::optional<BackendKind> ParseBackendKind(std::string_view name) {
  if (name == "remote") return BackendKind::kRemote;
  if (name == "scripted") return BackendKind::kScripted;
  if (name == "replay") return BackendKind::kReplay;
  if (name == "gold") return BackendKind::kGold;
  return std::nullopt;
}

std::string_view ToString(BackendKind kind) {
  switch (kind) {
    case BackendKind::kRemote: return "remote";
    case BackendKind::kScripted: return "scripted";
    case BackendKind::kReplay: return "replay";
    case BackendKind::kGold: return "gold";
  }
  return "unknown";
}

TagResult CmdTag(const TagOptions& options) {
  const som::TagStyle style = ResolveStyle(options.style, options.font_scale);
  json doc = ReadJsonFile(options.elements);
  if (doc.is_object() && doc.contains("elements")) doc = doc["elements"];
  if (!doc.is_array()) throw UsageError("elements file must hold a JSON array of elements");
  std::vector<UIElement> elements;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      elements.push_back(doc[i].get<UIElement>());
    } catch (const json::exception& e) {
      throw DecodeError("/" + std::to_string(i), e.what());
    }
  }
  auto png = std::make_shared<const Bytes>(ReadFileBytes(options.image));
  const som::TaggedScreen screen = som::Annotate(png, elements, style);

  TagResult result;
  result.tagged_png = options.out_dir / "tagged.png";
  result.tag_map = options.out_dir / "tagmap.json";
  result.collisions = som::CollisionReport(screen);
  fs::create_directories(options.out_dir);
  WriteFileBytes(result.tagged_png, *screen.tagged_png);

  json tags = json::object();
  for (const auto& [tag, element] : screen.tag_map) {
    json entry = element;
    entry["center"] = BBoxCenter(element.bbox);
    tags[std::to_string(tag)] = entry;
  }
  json glyphs = json::array();
  for (const som::TagGlyph& g : screen.glyphs) {
    glyphs.push_back({{"tag", g.tag_id}, {"x0", g.rect.x0}, {"y0", g.rect.y0},
                      {"x1", g.rect.x1}, {"y1", g.rect.y1}});
  }
  json map = {{"style", som::StyleName(style)},
              {"font_scale", style.font_scale},
              {"width", screen.width},
              {"height", screen.height},
              {"tags", tags},
              {"glyphs", glyphs},
              {"collisions", result.collisions}};
  WriteText(result.tag_map, map.dump(2) + "\n");
  return result;
}

RunSummary CmdRun(const RunConfig& config) {
  if (config.out_dir.empty()) throw UsageError("--out is required");
  if (config.max_steps <= 0) throw UsageError("--max-steps must be positive");
  if (config.parallel <= 0) throw UsageError("--parallel must be positive");

  const auto violations = data::Validate(config.dataset);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "dataset " << config.dataset.string() << " has " << violations.size()
        << " violation(s); first: " << violations[0].file << violations[0].pointer << " ["
        << violations[0].rule << "] " << violations[0].message;
    throw UsageError(msg.str());
  }
  const data::Dataset ds = data::Dataset::Open(config.dataset);
  const std::vector<std::string> ids = SelectEpisodes(config, ds);
  for (const std::string& id : ids) CheckEpisodeId(id);

  agent::AgentConfig agent_config;
  agent::ApplyCondition(agent_config, config.condition);
  agent_config.prompt_variant = config.prompt_variant;
  agent_config.tag_style = ResolveStyle(config.tag_style, std::nullopt);
  agent_config.max_steps = config.max_steps;
  agent_config.decode = config.decode;
  const agent::PromptLibrary prompts = config.prompt_dir
                                           ? agent::PromptLibrary::FromDirectory(*config.prompt_dir)
                                           : agent::PromptLibrary::Builtin();
  prompts.Validate();

  const fs::path run_dir = config.out_dir;
  fs::create_directories(run_dir / kTranscriptDir);
  const std::string label =
      config.label.empty() ? fs::absolute(run_dir).lexically_normal().filename().string()
                           : config.label;

  std::shared_ptr<llm::Backend> inner;
  std::shared_ptr<GoldBackend> gold;
  bool deterministic = true;
  int parallel = config.parallel;
  switch (config.backend) {
    case BackendKind::kScripted:
      inner = std::make_shared<llm::ScriptedBackend>(llm::ScriptedBackend::LoadScript(config.script));
      break;
    case BackendKind::kGold:
      gold = std::make_shared<GoldBackend>();
      inner = gold;
      break;
    case BackendKind::kReplay:
      inner = llm::OpenSession(llm::SessionMode::kReplay, config.session);
      break;
    case BackendKind::kRemote: {
      if (config.endpoint.empty()) throw UsageError("--endpoint is required for the remote backend");
      llm::RemoteConfig rc;
      rc.endpoint = config.endpoint;
      rc.model = config.model;
      rc.api_key = llm::ApiKeyFromEnv(config.api_key_env);
      rc.auth_header = config.auth_header;
      rc.max_in_flight = config.max_in_flight;
      inner = std::make_shared<llm::RemoteBackend>(rc);
      deterministic = false;
      break;
    }
  }
  if ((config.backend == BackendKind::kScripted || config.backend == BackendKind::kGold) &&
      parallel > 1) {
    spdlog::warn("{} backend consumes responses in order; running episodes sequentially",
                 ToString(config.backend));
    parallel = 1;
  }
  std::shared_ptr<llm::Backend> backend =
      config.backend == BackendKind::kReplay
          ? inner
          : llm::OpenSession(llm::SessionMode::kRecord, run_dir / kSessionFile, inner);

  std::vector<std::optional<agent::AgentTranscript>> transcripts(ids.size());
  std::map<std::string, std::string> failures;
  std::mutex failures_mu;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < ids.size(); i = next++) {
      const std::string& id = ids[i];
      try {
        Episode episode = ds.LoadEpisode(id);
        if (gold) gold->Reset(episode);
        agent::AgentConfig episode_config = agent_config;
        if (gold) {
          episode_config.max_steps =
              std::max<int>(episode_config.max_steps, static_cast<int>(episode.steps.size()));
        }
        agent::RunHooks hooks;
        hooks.clock = deterministic ? agent::LogicalClock() : agent::SystemClock();
        if (config.save_tagged) {
          hooks.on_tagged = [&run_dir, id](int step, const som::TaggedScreen& screen) {
            const fs::path file =
                run_dir / kTaggedDir / id / (std::to_string(step) + ".png");
            fs::create_directories(file.parent_path());
            WriteFileBytes(file, *screen.tagged_png);
          };
        }
        agent::DatasetScreenProvider screens(ds.root(), episode);
        const agent::EpisodeInput input{episode.episode_id, episode.instruction};
        transcripts[i] = agent::RunEpisode(episode_config, prompts, *backend, input, screens, hooks);
      } catch (const llm::BackendError& e) {
        spdlog::error("episode {}: {}", id, e.what());
        std::lock_guard lock(failures_mu);
        failures[id] = e.what();
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 1; t < parallel; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  std::vector<agent::AgentTranscript> done;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!transcripts[i]) continue;
    agent::SaveTranscript(run_dir / kTranscriptDir / (ids[i] + ".jsonl"), *transcripts[i]);
    done.push_back(std::move(*transcripts[i]));
  }
  data::WritePredictions(run_dir / kPredictionsFile, done);
  WriteText(run_dir / kRunFile, RunJson(config, label, ids, failures).dump(2) + "\n");

  RunSummary summary;
  summary.run_dir = run_dir;
  summary.episode_ids = ids;
  summary.failures = std::move(failures);
  summary.exit_code = summary.failures.empty() ? 0 : 3;
  return summary;
}

std::string EncodeReport(const eval::ScoreReport& report) {
  return eval::ToJson(report).dump(2) + "\n";
}

EvalResult CmdEval(const EvalOptions& options) {
  if (!options.rule.IsValid()) throw UsageError("click threshold must lie in (0, 1)");
  const fs::path& run_dir = options.run_dir;
  const fs::path predictions = run_dir / kPredictionsFile;
  if (!fs::is_regular_file(predictions)) {
    throw UsageError("run directory " + run_dir.string() + " has no " + kPredictionsFile);
  }
  json run = json::object();
  if (fs::exists(run_dir / kRunFile)) run = ReadJsonFile(run_dir / kRunFile);

  fs::path dataset_root;
  if (options.dataset) {
    dataset_root = *options.dataset;
  } else if (run.contains("dataset")) {
    dataset_root = run["dataset"].get<std::string>();
  } else {
    throw UsageError("no --dataset given and run.json does not name one");
  }

  const data::PredictionTable table = data::LoadPredictions(predictions);
  if (table.empty()) {
    throw UsageError("run directory " + run_dir.string() + " has no predictions");
  }
  const data::Dataset ds = data::Dataset::Open(dataset_root);

  std::vector<eval::EpisodeResult> results;
  std::vector<eval::ScoredStep> scored;
  std::ostringstream verdicts;
  for (const auto& [id, preds] : table) {
    const Episode episode = ds.LoadEpisode(id);
    eval::EpisodeResult r = eval::ScoreEpisodeDetailed(preds, episode, options.rule);
    for (std::size_t t = 0; t < episode.steps.size(); ++t) {
      const eval::StepVerdict& v = r.verdicts[t];
      const eval::Prediction pred = t < preds.size() ? preds[t] : std::nullopt;
      verdicts << json{{"episode_id", id},
                       {"step", t},
                       {"correct", v.correct},
                       {"reason", eval::ToString(v.reason)}}
                      .dump()
               << '\n';
      scored.push_back({id, static_cast<int>(t), pred, episode.steps[t].gold_action,
                        episode.steps[t].elements, v});
    }
    results.push_back(std::move(r));
  }

  EvalResult out;
  out.report = eval::Aggregate(results);
  out.label = options.label ? *options.label
              : run.contains("label") ? run["label"].get<std::string>()
                                      : fs::absolute(run_dir).lexically_normal().filename().string();
  const std::map<std::string, eval::ScoreReport> rows{{out.label, out.report}};
  out.markdown = eval::MarkdownTable(rows);
  out.csv = eval::CsvTable(rows);

  WriteText(run_dir / "report.json", EncodeReport(out.report));
  WriteText(run_dir / "verdicts.jsonl", verdicts.str());
  WriteText(run_dir / "triage.json",
            eval::ToJson(eval::Triage(scored, options.rule)).dump(2) + "\n");
  WriteText(run_dir / "table.md", out.markdown);
  WriteText(run_dir / "table.csv", out.csv);
  return out;
}

}  // namespace guinav::cli
