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

#include "guinav/prompts.h"

#include <array>
#include <fstream>
#include <sstream>
#include <utility>

#include "guinav/errors.h"

namespace guinav::agent {
namespace {

// Generated from core/assets/prompts/*.txt; defines kPromptAssets.
#include "prompt_assets.inc"

std::string Asset(std::string_view name) {
  for (const auto& [key, text] : kPromptAssets) {
    if (key == name) return std::string(text);
  }
  throw ContractViolation("missing builtin prompt asset " + std::string(name));
}

constexpr std::array<std::pair<PromptVariantKind, std::string_view>, 3>
    kVariantNames{{
        {PromptVariantKind::kBaseline, "baseline"},
        {PromptVariantKind::kThink, "think"},
        {PromptVariantKind::kDetail, "detail"},
    }};

PromptLibrary LoadBuiltin() {
  PromptLibrary lib;
  lib.system = Asset("system");
  for (const auto& [kind, name] : kVariantNames) lib.action[kind] = Asset(name);
  lib.summarize = Asset("summarize");
  lib.format_reminder = Asset("format_reminder");
  lib.history_section = Asset("history_section");
  lib.screen_text_section = Asset("screen_text_section");
  return lib;
}

void Require(std::string_view templ, std::string_view name,
             std::string_view placeholder) {
  if (templ.find(placeholder) == std::string_view::npos) {
    throw ContractViolation("prompt template '" + std::string(name) +
                            "' lacks placeholder " + std::string(placeholder));
  }
}

}  // namespace

std::string_view ToString(PromptVariantKind v) {
  for (const auto& [kind, name] : kVariantNames) {
    if (kind == v) return name;
  }
  return "unknown";
}

std::optional<PromptVariantKind> ParsePromptVariant(std::string_view name) {
  for (const auto& [kind, text] : kVariantNames) {
    if (text == name) return kind;
  }
  return std::nullopt;
}

const PromptLibrary& PromptLibrary::Builtin() {
  static const PromptLibrary lib = LoadBuiltin();
  return lib;
}

PromptLibrary PromptLibrary::FromDirectory(const std::filesystem::path& dir) {
  PromptLibrary lib = Builtin();
  auto load = [&](std::string_view name, std::string& slot) {
    std::ifstream in(dir / (std::string(name) + ".txt"));
    if (!in) return;
    std::ostringstream buf;
    buf << in.rdbuf();
    slot = buf.str();
  };
  load("system", lib.system);
  for (const auto& [kind, name] : kVariantNames) load(name, lib.action[kind]);
  load("summarize", lib.summarize);
  load("format_reminder", lib.format_reminder);
  load("history_section", lib.history_section);
  load("screen_text_section", lib.screen_text_section);
  lib.Validate();
  return lib;
}

PromptVariant PromptLibrary::Variant(PromptVariantKind kind) const {
  return {kind, action.at(kind)};
}

void PromptLibrary::Validate() const {
  for (const auto& [kind, name] : kVariantNames) {
    auto it = action.find(kind);
    if (it == action.end()) {
      throw ContractViolation("no template for prompt variant " + std::string(name));
    }
    Require(it->second, name, "{instruction}");
    Require(it->second, name, "{history}");
    Require(it->second, name, "{tag_range}");
  }
  Require(summarize, "summarize", "{action}");
  Require(summarize, "summarize", "{history}");
  Require(history_section, "history_section", "{history}");
  Require(screen_text_section, "screen_text_section", "{screen_text}");
}

std::string RenderTemplate(std::string_view templ,
                           const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(templ.size());
  std::size_t i = 0;
  while (i < templ.size()) {
    if (templ[i] == '{') {
      const std::size_t close = templ.find('}', i + 1);
      if (close != std::string_view::npos) {
        auto it = values.find(std::string(templ.substr(i + 1, close - i - 1)));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(templ[i++]);
  }
  return out;
}

}  // namespace guinav::agent
