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
#ifndef GUINAV_AGENT_H_
#define GUINAV_AGENT_H_

// The navigation loop. Each step asks the backend for an action given the
// instruction, the raw and tagged screens and the running history summary,
// then asks it again (text only) to fold that output into a new summary:
//
//   action_t  = model(instruction, screen_t, tagged_t, history_{t-1})
//   history_t = model(action_t, history_{t-1})

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "guinav/action_parser.h"
#include "guinav/llm.h"
#include "guinav/model.h"
#include "guinav/prompts.h"
#include "guinav/som.h"

namespace guinav::agent {

inline constexpr std::size_t kDefaultHistoryCap = 2000;

struct AgentConfig {
  PromptVariantKind prompt_variant = PromptVariantKind::kBaseline;
  bool use_tags = true;
  bool include_text_description = false;
  bool include_history = false;
  int max_steps = 10;
  som::TagStyle tag_style = som::TagStyle::Center();
  llm::DecodeParams decode;
  std::size_t history_cap = kDefaultHistoryCap;
};

// Rows of the main results table: image-only, +text, +history. Each row
// adds to the previous one.
enum class Condition { kImageOnly, kText, kHistory };

std::optional<Condition> ParseCondition(std::string_view name);
std::string_view ToString(Condition c);
void ApplyCondition(AgentConfig& config, Condition condition);

struct HistoryState {
  int step_index = 0;
  std::string text;
};

// One line per tagged element, e.g. [3] text "Settings" at (0.120, 0.400).
std::string DescribeScreen(const som::TaggedScreen& screen);

llm::ChatRequest BuildActionPrompt(const AgentConfig& config,
                                   const PromptLibrary& prompts,
                                   const std::string& instruction,
                                   const som::TaggedScreen& tagged,
                                   const HistoryState& history,
                                   const std::optional<std::string>& screen_text);

// Keeps the newest characters when the summary exceeds cap, never splitting
// a UTF-8 sequence.
std::string TruncateOldest(const std::string& text, std::size_t cap);

HistoryState SummarizeHistory(llm::Backend& backend, const AgentConfig& config,
                              const PromptLibrary& prompts,
                              const std::string& action_text,
                              const HistoryState& history);

struct Screen {
  llm::SharedBytes png;
  std::vector<UIElement> elements;
  // Dataset-relative path, or a capture id for live screens.
  std::string reference;
};

class ScreenProvider {
 public:
  virtual ~ScreenProvider() = default;
  // Screen for step t, or nullopt when no more screens exist.
  virtual std::optional<Screen> Next(int step) = 0;
  // Live providers abort on a second parse failure instead of moving on.
  virtual bool live() const = 0;
};

// Replays the recorded screens of a gold episode.
class DatasetScreenProvider : public ScreenProvider {
 public:
  DatasetScreenProvider(std::filesystem::path dataset_root, Episode episode);
  std::optional<Screen> Next(int step) override;
  bool live() const override { return false; }

 private:
  std::filesystem::path root_;
  Episode episode_;
};

// Placeholder for an on-device capture adapter; always throws.
class LiveCaptureProvider : public ScreenProvider {
 public:
  std::optional<Screen> Next(int step) override;
  bool live() const override { return true; }
};

enum class Termination {
  kComplete,
  kImpossible,
  kMaxSteps,
  kScreensExhausted,
  kParseFailureAbort,
};

std::string_view ToString(Termination t);
std::optional<Termination> ParseTermination(std::string_view name);

struct TranscriptStep {
  int index = 0;
  std::string screen_reference;
  std::string prompt_text;
  std::string raw_model_text;
  ParseOutcome parsed;
  std::string history_after;
  std::string tagged_screen_sha256;
  int attempts = 1;
  std::int64_t started_at_ms = 0;
  std::int64_t finished_at_ms = 0;

  friend bool operator==(const TranscriptStep&, const TranscriptStep&) = default;
};

struct AgentTranscript {
  std::string episode_id;
  std::string instruction;
  std::vector<TranscriptStep> steps;
  Termination termination = Termination::kMaxSteps;

  friend bool operator==(const AgentTranscript&, const AgentTranscript&) = default;
};

// Milliseconds; injected so scripted and replayed runs stay byte-identical.
using Clock = std::function<std::int64_t()>;
Clock SystemClock();
Clock LogicalClock();

struct RunHooks {
  Clock clock;
  // Called with every tagged screen, e.g. to persist the PNG.
  std::function<void(int step, const som::TaggedScreen&)> on_tagged;
};

struct EpisodeInput {
  std::string episode_id;
  std::string instruction;
};

// Loops annotate -> prompt -> complete -> parse -> summarize until a status
// action, max_steps, the screens run out, or (live only) a repeated parse
// failure. A parse failure is retried once with a format reminder. Backend
// errors propagate.
AgentTranscript RunEpisode(const AgentConfig& config,
                           const PromptLibrary& prompts, llm::Backend& backend,
                           const EpisodeInput& input, ScreenProvider& screens,
                           const RunHooks& hooks = {});

// Transcript files: JSONL, one record per step.
nlohmann::json EncodeTranscriptStep(const AgentTranscript& transcript,
                                    std::size_t step);
void WriteTranscript(std::ostream& out, const AgentTranscript& transcript);
AgentTranscript ReadTranscript(std::istream& in);
void SaveTranscript(const std::filesystem::path& path,
                    const AgentTranscript& transcript);
AgentTranscript LoadTranscript(const std::filesystem::path& path);

// The parsed action of a step, or nullopt for a parse failure.
std::optional<Action> PredictedAction(const TranscriptStep& step);

}  // namespace guinav::agent

#endif  // GUINAV_AGENT_H_
