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
#ifndef GUINAV_PROMPTS_H_
#define GUINAV_PROMPTS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace guinav::agent {

enum class PromptVariantKind { kBaseline, kThink, kDetail };

std::string_view ToString(PromptVariantKind v);
std::optional<PromptVariantKind> ParsePromptVariant(std::string_view name);

struct PromptVariant {
  PromptVariantKind variant = PromptVariantKind::kBaseline;
  // Must contain {instruction}, {history} and {tag_range}; {screen_text} is
  // optional.
  std::string template_text;
};

// Every template the runtime renders. The builtin library is generated at
// build time from core/assets/prompts/*.txt.
struct PromptLibrary {
  std::string system;
  std::map<PromptVariantKind, std::string> action;
  std::string summarize;
  std::string format_reminder;
  std::string history_section;
  std::string screen_text_section;

  static const PromptLibrary& Builtin();
  // Loads the same file names from a directory; missing files fall back to
  // the builtin text.
  static PromptLibrary FromDirectory(const std::filesystem::path& dir);

  PromptVariant Variant(PromptVariantKind kind) const;
  // Throws ContractViolation naming the first template missing a required
  // placeholder.
  void Validate() const;
};

// Replaces {name} for every key in values. Unknown placeholders are kept.
std::string RenderTemplate(std::string_view templ,
                           const std::map<std::string, std::string>& values);

}  // namespace guinav::agent

#endif  // GUINAV_PROMPTS_H_
