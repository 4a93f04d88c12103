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
#ifndef GUINAV_ACTION_PARSER_H_
#define GUINAV_ACTION_PARSER_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "guinav/model.h"
#include "guinav/som.h"

namespace guinav::agent {

// Displacement of a scroll synthesized from a direction word, measured from
// the screen center.
inline constexpr double kScrollMagnitude = 0.4;

enum class ParseFailureKind { kUnparseable, kUnknownTag, kEmptyResponse };

std::string_view ToString(ParseFailureKind k);
std::optional<ParseFailureKind> ParseParseFailureKind(std::string_view name);

struct ParseFailure {
  ParseFailureKind kind = ParseFailureKind::kUnparseable;
  std::string detail;
  friend bool operator==(const ParseFailure&, const ParseFailure&) = default;
};

struct ParsedAction {
  Action action;
  // Set when the model clicked by tag.
  std::optional<int> tag;
  friend bool operator==(const ParsedAction&, const ParsedAction&) = default;
};

using ParseOutcome = std::variant<ParsedAction, ParseFailure>;

// Recognizes, case-insensitively:
//   Click by tag      "Action: Click, ID: 9"       -> tap at the tag center
//   Click by location "Click, Location: (0.3, 0.5)"
//   Scroll            "Scroll, Direction: up"      -> center +/- 0.4
//   Type              'Type, Text: "hello"'
//   Press             "Press, Key: Back" / Home / Enter
//   Status            "Status, Task: Complete" / Impossible
// The earliest well-formed directive in the text wins. Without any verb, a
// bare reference such as "(ID: 9)" is read as a click. Never throws.
ParseOutcome ParseAction(std::string_view text, const som::TaggedScreen* screen);

// Canonical directive text for an action; ParseAction maps it back to an
// action the evaluator accepts against the original. Taps use the touch
// point, scrolls their direction.
std::string FormatAction(const Action& action);

// Synthesized scroll gesture for a direction in finger-motion terms.
Action ScrollAction(GestureClass direction);

}  // namespace guinav::agent

#endif  // GUINAV_ACTION_PARSER_H_
