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

#include "guinav/agent.h"

#include <spdlog/spdlog.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>

#include "guinav/codec.h"
#include "guinav/sha256.h"

namespace guinav::agent {
namespace {

using nlohmann::json;

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool IsContinuationByte(char c) {
  return (static_cast<unsigned char>(c) & 0xC0) == 0x80;
}

json EncodeOutcome(const ParseOutcome& outcome) {
  if (const auto* ok = std::get_if<ParsedAction>(&outcome)) {
    json j = {{"action", ok->action}};
    if (ok->tag) j["tag"] = *ok->tag;
    return j;
  }
  const auto& failure = std::get<ParseFailure>(outcome);
  return {{"parse_failure",
           {{"kind", ToString(failure.kind)}, {"detail", failure.detail}}}};
}

ParseOutcome DecodeOutcome(const json& j) {
  if (j.contains("action")) {
    ParsedAction ok{DecodeAction(j.at("action")), std::nullopt};
    if (j.contains("tag")) ok.tag = j.at("tag").get<int>();
    return ok;
  }
  const json& f = j.at("parse_failure");
  auto kind = ParseParseFailureKind(f.at("kind").get<std::string>());
  if (!kind) throw DecodeError("/parsed/parse_failure/kind", "unknown failure kind");
  return ParseFailure{*kind, f.value("detail", std::string())};
}

}  // namespace

std::optional<Condition> ParseCondition(std::string_view name) {
  if (name == "image-only") return Condition::kImageOnly;
  if (name == "+text" || name == "text") return Condition::kText;
  if (name == "+history" || name == "history") return Condition::kHistory;
  return std::nullopt;
}

std::string_view ToString(Condition c) {
  switch (c) {
    case Condition::kImageOnly: return "image-only";
    case Condition::kText: return "+text";
    case Condition::kHistory: return "+history";
  }
  return "image-only";
}

void ApplyCondition(AgentConfig& config, Condition condition) {
  config.use_tags = true;
  config.include_text_description = condition != Condition::kImageOnly;
  config.include_history = condition == Condition::kHistory;
}

std::string DescribeScreen(const som::TaggedScreen& screen) {
  std::string out;
  for (const auto& [tag, element] : screen.tag_map) {
    const Point c = BBoxCenter(element.bbox);
    char where[48];
    std::snprintf(where, sizeof(where), " at (%.3f, %.3f)", c.x, c.y);
    out += "[" + std::to_string(tag) + "] ";
    if (element.ocr_text) {
      out += "text \"" + *element.ocr_text + "\"";
    } else {
      out += "icon " + element.icon_class.value_or("");
    }
    out += where;
    out += '\n';
  }
  return out.empty() ? std::string("(no elements detected)\n") : out;
}

llm::ChatRequest BuildActionPrompt(const AgentConfig& config,
                                   const PromptLibrary& prompts,
                                   const std::string& instruction,
                                   const som::TaggedScreen& tagged,
                                   const HistoryState& history,
                                   const std::optional<std::string>& screen_text) {
  if (config.include_text_description && !screen_text) {
    throw ContractViolation(
        "screen text description is required when include_text_description is set");
  }
  std::string history_block;
  if (config.include_history && !history.text.empty()) {
    history_block = RenderTemplate(prompts.history_section, {{"history", history.text}});
  }
  std::string screen_block;
  if (config.include_text_description) {
    screen_block =
        RenderTemplate(prompts.screen_text_section, {{"screen_text", *screen_text}});
  }
  llm::ChatRequest request;
  request.system_text = prompts.system;
  request.user_text = RenderTemplate(
      prompts.action.at(config.prompt_variant),
      {{"instruction", instruction},
       {"history", history_block},
       {"screen_text", screen_block},
       {"tag_range", config.use_tags ? som::TagRange(tagged) : std::string("none")}});
  request.images.push_back({"raw", tagged.raw_png});
  if (config.use_tags) request.images.push_back({"tagged", tagged.tagged_png});
  request.decode = config.decode;
  return request;
}

std::string TruncateOldest(const std::string& text, std::size_t cap) {
  if (text.size() <= cap) return text;
  std::size_t start = text.size() - cap;
  while (start < text.size() && IsContinuationByte(text[start])) ++start;
  return text.substr(start);
}

HistoryState SummarizeHistory(llm::Backend& backend, const AgentConfig& config,
                              const PromptLibrary& prompts,
                              const std::string& action_text,
                              const HistoryState& history) {
  llm::ChatRequest request;
  request.user_text = RenderTemplate(
      prompts.summarize, {{"action", action_text}, {"history", history.text}});
  request.decode = config.decode;
  const llm::ChatResponse response = backend.Complete(request);
  HistoryState next{history.step_index + 1, history.text};
  const std::string summary = Trim(response.text);
  if (summary.empty()) {
    spdlog::warn("empty history summary at step {}; keeping previous history",
                 history.step_index);
    return next;
  }
  next.text = TruncateOldest(summary, config.history_cap);
  return next;
}

DatasetScreenProvider::DatasetScreenProvider(std::filesystem::path dataset_root,
                                             Episode episode)
    : root_(std::move(dataset_root)), episode_(std::move(episode)) {}

std::optional<Screen> DatasetScreenProvider::Next(int step) {
  if (step < 0 || static_cast<std::size_t>(step) >= episode_.steps.size()) {
    return std::nullopt;
  }
  const Step& s = episode_.steps[static_cast<std::size_t>(step)];
  return Screen{std::make_shared<const Bytes>(ReadFileBytes(root_ / s.screenshot)),
                s.elements, s.screenshot};
}

std::optional<Screen> LiveCaptureProvider::Next(int) {
  throw ContractViolation("live screen capture is not available in this build");
}

std::string_view ToString(Termination t) {
  switch (t) {
    case Termination::kComplete: return "complete";
    case Termination::kImpossible: return "impossible";
    case Termination::kMaxSteps: return "max_steps";
    case Termination::kScreensExhausted: return "screens_exhausted";
    case Termination::kParseFailureAbort: return "parse_failure_abort";
  }
  return "max_steps";
}

std::optional<Termination> ParseTermination(std::string_view name) {
  for (Termination t : {Termination::kComplete, Termination::kImpossible,
                        Termination::kMaxSteps, Termination::kScreensExhausted,
                        Termination::kParseFailureAbort}) {
    if (ToString(t) == name) return t;
  }
  return std::nullopt;
}

Clock SystemClock() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

Clock LogicalClock() {
  auto tick = std::make_shared<std::atomic<std::int64_t>>(0);
  return [tick] { return tick->fetch_add(1); };
}

AgentTranscript RunEpisode(const AgentConfig& config,
                           const PromptLibrary& prompts, llm::Backend& backend,
                           const EpisodeInput& input, ScreenProvider& screens,
                           const RunHooks& hooks) {
  if (config.max_steps < 1) throw ContractViolation("max_steps must be >= 1");
  const Clock clock = hooks.clock ? hooks.clock : SystemClock();

  AgentTranscript transcript;
  transcript.episode_id = input.episode_id;
  transcript.instruction = input.instruction;
  transcript.termination = Termination::kMaxSteps;
  HistoryState history;

  for (int t = 0; t < config.max_steps; ++t) {
    std::optional<Screen> screen = screens.Next(t);
    if (!screen) {
      transcript.termination = Termination::kScreensExhausted;
      break;
    }
    TranscriptStep step;
    step.index = t;
    step.started_at_ms = clock();
    step.screen_reference = screen->reference;

    const som::TaggedScreen tagged =
        som::Annotate(screen->png, screen->elements, config.tag_style);
    if (hooks.on_tagged) hooks.on_tagged(t, tagged);
    step.tagged_screen_sha256 = Sha256Hex(*tagged.tagged_png);
    const som::TaggedScreen* grounding = config.use_tags ? &tagged : nullptr;

    std::optional<std::string> screen_text;
    if (config.include_text_description) screen_text = DescribeScreen(tagged);
    llm::ChatRequest request =
        BuildActionPrompt(config, prompts, input.instruction, tagged, history, screen_text);
    llm::ChatResponse response = backend.Complete(request);
    ParseOutcome outcome = ParseAction(response.text, grounding);
    if (std::holds_alternative<ParseFailure>(outcome)) {
      request.user_text += "\n\n" + RenderTemplate(prompts.format_reminder,
                                                   {{"tag_range", som::TagRange(tagged)}});
      response = backend.Complete(request);
      outcome = ParseAction(response.text, grounding);
      step.attempts = 2;
    }
    step.prompt_text = request.user_text;
    step.raw_model_text = response.text;
    step.parsed = outcome;

    if (config.include_history) {
      history = SummarizeHistory(backend, config, prompts, response.text, history);
    } else {
      ++history.step_index;
    }
    step.history_after = history.text;
    step.finished_at_ms = clock();
    transcript.steps.push_back(std::move(step));

    if (const auto* failure = std::get_if<ParseFailure>(&outcome)) {
      if (screens.live()) {
        transcript.termination = Termination::kParseFailureAbort;
        break;
      }
      spdlog::info("episode {} step {}: {} ({})", input.episode_id, t,
                   ToString(failure->kind), failure->detail);
      continue;
    }
    const Action& action = std::get<ParsedAction>(outcome).action;
    if (action.kind == ActionKind::kStatusComplete) {
      transcript.termination = Termination::kComplete;
      break;
    }
    if (action.kind == ActionKind::kStatusImpossible) {
      transcript.termination = Termination::kImpossible;
      break;
    }
  }
  return transcript;
}

json EncodeTranscriptStep(const AgentTranscript& transcript, std::size_t i) {
  const TranscriptStep& s = transcript.steps.at(i);
  json j = {{"episode_id", transcript.episode_id},
            {"instruction", transcript.instruction},
            {"step", s.index},
            {"screen", s.screen_reference},
            {"prompt_text", s.prompt_text},
            {"raw_model_text", s.raw_model_text},
            {"parsed", EncodeOutcome(s.parsed)},
            {"history_after", s.history_after},
            {"tagged_screen_sha256", s.tagged_screen_sha256},
            {"attempts", s.attempts},
            {"started_at_ms", s.started_at_ms},
            {"finished_at_ms", s.finished_at_ms}};
  if (i + 1 == transcript.steps.size()) {
    j["termination"] = ToString(transcript.termination);
  }
  return j;
}

void WriteTranscript(std::ostream& out, const AgentTranscript& transcript) {
  for (std::size_t i = 0; i < transcript.steps.size(); ++i) {
    out << EncodeTranscriptStep(transcript, i).dump() << '\n';
  }
}

AgentTranscript ReadTranscript(std::istream& in) {
  AgentTranscript t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    t.episode_id = j.at("episode_id").get<std::string>();
    t.instruction = j.at("instruction").get<std::string>();
    TranscriptStep s;
    s.index = j.at("step").get<int>();
    s.screen_reference = j.at("screen").get<std::string>();
    s.prompt_text = j.at("prompt_text").get<std::string>();
    s.raw_model_text = j.at("raw_model_text").get<std::string>();
    s.parsed = DecodeOutcome(j.at("parsed"));
    s.history_after = j.at("history_after").get<std::string>();
    s.tagged_screen_sha256 = j.at("tagged_screen_sha256").get<std::string>();
    s.attempts = j.at("attempts").get<int>();
    s.started_at_ms = j.at("started_at_ms").get<std::int64_t>();
    s.finished_at_ms = j.at("finished_at_ms").get<std::int64_t>();
    t.steps.push_back(std::move(s));
    if (j.contains("termination")) {
      auto term = ParseTermination(j["termination"].get<std::string>());
      if (!term) throw DecodeError("/termination", "unknown termination");
      t.termination = *term;
    }
  }
  return t;
}

void SaveTranscript(const std::filesystem::path& path,
                    const AgentTranscript& transcript) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write transcript " + path.string());
  WriteTranscript(out, transcript);
}

AgentTranscript LoadTranscript(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read transcript " + path.string());
  return ReadTranscript(in);
}

std::optional<Action> PredictedAction(const TranscriptStep& step) {
  if (const auto* ok = std::get_if<ParsedAction>(&step.parsed)) return ok->action;
  return std::nullopt;
}

}  // namespace guinav::agent
