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

#ifndef GUINAV_TESTS_SUPPORT_PARSE_CORPUS_H_
#define GUINAV_TESTS_SUPPORT_PARSE_CORPUS_H_

#include <optional>
#include <string>
#include <vector>

#include "guinav/action_parser.h"
#include "guinav/model.h"
#include "guinav/som.h"

namespace guinav::testing {

// Twelve elements; tag k has bbox x = 0.05 * k, y = 0.06 * k, w = 0.04,
// h = 0.05, so its center is (0.05k + 0.02, 0.06k + 0.025).
inline std::vector<UIElement> CorpusElements() {
  std::vector<UIElement> out;
  for (int k = 1; k <= 12; ++k) {
    out.push_back(TextElement({0.05 * k, 0.06 * k, 0.04, 0.05}, "e" + std::to_string(k)));
  }
  return out;
}

inline Point CorpusTagCenter(int k) { return {0.05 * k + 0.02, 0.06 * k + 0.025}; }

struct CorpusCase {
  std::string text;
  // Expected action, or nullopt when a ParseFailure of failure_kind is expected.
  std::optional<Action> action;
  std::optional<int> tag;
  agent::ParseFailureKind failure_kind = agent::ParseFailureKind::kUnparseable;
};

inline Action Scroll(GestureClass g) { return agent::ScrollAction(g); }

inline std::vector<CorpusCase> ParseCorpus() {
  using agent::ParseFailureKind;
  const Action back = Action::Simple(ActionKind::kPressBack);
  return {
      {"{Action: Click, Location: (0.31, 0.57)}", Action::Tap({0.31, 0.57}), std::nullopt},
      {"ID: 9", Action::Tap(CorpusTagCenter(9)), 9},
      {"The dismiss button looks right (ID: 9), so I pick it.", Action::Tap(CorpusTagCenter(9)), 9},
      {"Action: Click, ID: 3", Action::Tap(CorpusTagCenter(3)), 3},
      {"click on tag 12", Action::Tap(CorpusTagCenter(12)), 12},
      {"Tap the element [4]", Action::Tap(CorpusTagCenter(4)), 4},
      {"CLICK, Mark: 7", Action::Tap(CorpusTagCenter(7)), 7},
      {"Action: tap, Location: [0.5, 0.25]", Action::Tap({0.5, 0.25}), std::nullopt},
      {"Reasoning: the button is at the top.\nAction: Click, Location: (0.1, 0.9)",
       Action::Tap({0.1, 0.9}), std::nullopt},
      {"Action: Scroll, Direction: up", Scroll(GestureClass::kScrollUp), std::nullopt},
      {"scroll down to see more", Scroll(GestureClass::kScrollDown), std::nullopt},
      {"Swipe left", Scroll(GestureClass::kScrollLeft), std::nullopt},
      {"Action: Scroll, Direction: Right", Scroll(GestureClass::kScrollRight), std::nullopt},
      {"Action: Type, Text: \"milk frother\"", Action::TypeText("milk frother"), std::nullopt},
      {"type 'hello world'", Action::TypeText("hello world"), std::nullopt},
      {"Type, Text: \u201Cbudget $50\u201D", Action::TypeText("budget $50"), std::nullopt},
      {"Action: Press, Key: Back", back, std::nullopt},
      {"press home", Action::Simple(ActionKind::kPressHome), std::nullopt},
      {"Press the enter key", Action::Simple(ActionKind::kPressEnter), std::nullopt},
      {"Action: Status, Task: Complete", Action::Simple(ActionKind::kStatusComplete), std::nullopt},
      {"status: task is completed", Action::Simple(ActionKind::kStatusComplete), std::nullopt},
      {"Status: impossible", Action::Simple(ActionKind::kStatusImpossible), std::nullopt},
      {"First press back, then click (0.2, 0.2)", back, std::nullopt},
      {"", std::nullopt, std::nullopt, ParseFailureKind::kEmptyResponse},
      {"   \n\t ", std::nullopt, std::nullopt, ParseFailureKind::kEmptyResponse},
      {"I cannot help with that.", std::nullopt, std::nullopt, ParseFailureKind::kUnparseable},
      {"Action: Click, ID: 42", std::nullopt, std::nullopt, ParseFailureKind::kUnknownTag},
      {"Action: Click, Location: (1.4, 0.2)", std::nullopt, std::nullopt,
       ParseFailureKind::kUnparseable},
      {"Action: Type, Text: \"\"", std::nullopt, std::nullopt, ParseFailureKind::kUnparseable},
      {"Action: Scroll, Direction: sideways", std::nullopt, std::nullopt,
       ParseFailureKind::kUnparseable},
  };
}

}  // namespace guinav::testing

#endif  // GUINAV_TESTS_SUPPORT_PARSE_CORPUS_H_
