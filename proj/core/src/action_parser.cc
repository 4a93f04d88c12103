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

#include "guinav/action_parser.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdio>
#include <limits>

namespace guinav::agent {
namespace {

constexpr std::size_t kClickWindow = 64;
constexpr std::size_t kShortWindow = 40;

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

char Lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

// Cursor over one directive: a lowercase view for matching and the original
// text for payload extraction.
class Scanner {
 public:
  Scanner(std::string_view original, std::string_view lower, std::size_t pos,
          std::size_t end)
      : original_(original), lower_(lower), pos_(pos), end_(end) {}

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ >= end_; }
  void set_pos(std::size_t p) { pos_ = p; }
  char peek() const { return done() ? '\0' : lower_[pos_]; }
  char at(std::size_t i) const { return lower_[i]; }

  // Skips whitespace and the separator punctuation used between fields.
  void SkipSeparators() {
    while (!done()) {
      const char c = lower_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == ',' || c == ':' ||
          c == '=' || c == '-' || c == ';' || c == '#') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool Word(std::string_view word) {
    if (end_ - pos_ < word.size() || lower_.substr(pos_, word.size()) != word) {
      return false;
    }
    const std::size_t after = pos_ + word.size();
    if (after < lower_.size() && IsWordChar(lower_[after])) return false;
    pos_ = after;
    return true;
  }

  // Matches any of the words; returns the index or -1.
  template <std::size_t N>
  int OneOf(const std::array<std::string_view, N>& words) {
    for (std::size_t i = 0; i < N; ++i) {
      if (Word(words[i])) return static_cast<int>(i);
    }
    return -1;
  }

  std::optional<long> Integer() {
    const std::size_t start = pos_;
    while (!done() && std::isdigit(static_cast<unsigned char>(lower_[pos_]))) ++pos_;
    if (pos_ == start || pos_ - start > 9) {
      pos_ = start;
      return std::nullopt;
    }
    long value = 0;
    std::from_chars(lower_.data() + start, lower_.data() + pos_, value);
    return value;
  }

  std::optional<double> Decimal() {
    const std::size_t start = pos_;
    while (!done() && (std::isdigit(static_cast<unsigned char>(lower_[pos_])) ||
                       lower_[pos_] == '.')) {
      ++pos_;
    }
    double value = 0;
    auto [ptr, ec] = std::from_chars(lower_.data() + start, lower_.data() + pos_, value);
    if (pos_ == start || ec != std::errc() || ptr != lower_.data() + pos_) {
      pos_ = start;
      return std::nullopt;
    }
    return value;
  }

  void SkipSpaces() {
    while (!done() && (lower_[pos_] == ' ' || lower_[pos_] == '\t')) ++pos_;
  }

  bool Char(char c) {
    SkipSpaces();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  // A quoted string on the original text. Accepts "..", '..' and curly
  // double quotes.
  std::optional<std::string> Quoted() {
    static constexpr std::string_view kOpenCurly = "\xE2\x80\x9C";
    static constexpr std::string_view kCloseCurly = "\xE2\x80\x9D";
    std::string_view close;
    std::size_t body = 0;
    if (original_.substr(pos_, 3) == kOpenCurly) {
      close = kCloseCurly;
      body = pos_ + 3;
    } else if (peek() == '"') {
      close = "\"";
      body = pos_ + 1;
    } else if (peek() == '\'') {
      close = "'";
      body = pos_ + 1;
    } else {
      return std::nullopt;
    }
    std::size_t stop = original_.find(close, body);
    // Typed text stays on one line.
    const std::size_t newline = original_.find('\n', body);
    if (stop == std::string_view::npos || (newline != std::string_view::npos && newline < stop)) {
      return std::nullopt;
    }
    pos_ = stop + close.size();
    return std::string(original_.substr(body, stop - body));
  }

 private:
  std::string_view original_;
  std::string_view lower_;
  std::size_t pos_;
  std::size_t end_;
};

using Attempt = std::optional<ParseOutcome>;

Attempt TryClick(Scanner s, const som::TaggedScreen* screen) {
  static constexpr std::array<std::string_view, 5> kTagWords = {
      "id", "tag", "mark", "element", "number"};
  for (std::size_t p = s.pos();; ++p) {
    s.set_pos(p);
    if (s.done() || s.peek() == '\n') break;
    const char c = s.peek();
    if (c == '(' || c == '[') {
      Scanner t = s;
      t.set_pos(p + 1);
      t.SkipSpaces();
      auto x = t.Decimal();
      if (!x || !t.Char(',')) continue;
      t.SkipSpaces();
      auto y = t.Decimal();
      if (!y || !t.Char(c == '(' ? ')' : ']')) continue;
      const Point at{*x, *y};
      if (at.IsValid()) return ParseOutcome(ParsedAction{Action::Tap(at), std::nullopt});
      continue;
    }
    if (p > 0 && IsWordChar(s.at(p - 1))) continue;
    Scanner t = s;
    if (t.OneOf(kTagWords) < 0) continue;
    t.SkipSeparators();
    t.Char('[');
    t.SkipSpaces();
    auto tag = t.Integer();
    if (!tag) continue;
    const int id = static_cast<int>(*tag);
    if (screen == nullptr || !screen->tag_map.contains(id)) {
      const int count = screen ? screen->tag_count() : 0;
      return ParseOutcome(ParseFailure{
          ParseFailureKind::kUnknownTag,
          "tag " + std::to_string(id) + " not in " +
              (count > 0 ? "1.." + std::to_string(count)
                         : std::string("an untagged screen"))});
    }
    return ParseOutcome(ParsedAction{Action::Tap(som::ResolveTag(*screen, id)), id});
  }
  return std::nullopt;
}

Attempt TryScroll(Scanner s) {
  static constexpr std::array<std::string_view, 4> kDirs = {"up", "down", "left", "right"};
  static constexpr std::array<GestureClass, 4> kGestures = {
      GestureClass::kScrollUp, GestureClass::kScrollDown,
      GestureClass::kScrollLeft, GestureClass::kScrollRight};
  const std::size_t start = s.pos();
  for (std::size_t p = start;; ++p) {
    s.set_pos(p);
    if (s.done() || s.peek() == '\n') break;
    if (p > 0 && IsWordChar(s.at(p - 1))) continue;
    Scanner t = s;
    const int dir = t.OneOf(kDirs);
    if (dir >= 0) return ParseOutcome(ParsedAction{ScrollAction(kGestures[dir]), std::nullopt});
  }
  return std::nullopt;
}

Attempt TryType(Scanner s) {
  s.SkipSeparators();
  if (s.Word("text")) s.SkipSeparators();
  auto text = s.Quoted();
  if (!text || text->empty()) return std::nullopt;
  return ParseOutcome(ParsedAction{Action::TypeText(*text), std::nullopt});
}

Attempt TryPress(Scanner s) {
  static constexpr std::array<std::string_view, 3> kKeys = {"back", "home", "enter"};
  static constexpr std::array<ActionKind, 3> kKinds = {
      ActionKind::kPressBack, ActionKind::kPressHome, ActionKind::kPressEnter};
  s.SkipSeparators();
  if (s.Word("key") || s.Word("button")) s.SkipSeparators();
  if (s.Word("the")) s.SkipSpaces();
  const int key = s.OneOf(kKeys);
  if (key < 0) return std::nullopt;
  return ParseOutcome(ParsedAction{Action::Simple(kKinds[key]), std::nullopt});
}

Attempt TryStatus(Scanner s) {
  static constexpr std::array<std::string_view, 5> kWords = {
      "complete", "completed", "done", "impossible", "infeasible"};
  s.SkipSeparators();
  if (s.Word("task")) s.SkipSeparators();
  if (s.Word("is")) s.SkipSpaces();
  const int w = s.OneOf(kWords);
  if (w < 0) return std::nullopt;
  const ActionKind kind = w < 3 ? ActionKind::kStatusComplete : ActionKind::kStatusImpossible;
  return ParseOutcome(ParsedAction{Action::Simple(kind), std::nullopt});
}

enum class Verb { kClick, kScroll, kType, kPress, kStatus };

struct VerbWord {
  std::string_view word;
  Verb verb;
};

constexpr std::array<VerbWord, 7> kVerbs = {{
    {"click", Verb::kClick},
    {"tap", Verb::kClick},
    {"scroll", Verb::kScroll},
    {"swipe", Verb::kScroll},
    {"type", Verb::kType},
    {"press", Verb::kPress},
    {"status", Verb::kStatus},
}};

}  // namespace

std::string_view ToString(ParseFailureKind k) {
  switch (k) {
    case ParseFailureKind::kUnparseable: return "unparseable";
    case ParseFailureKind::kUnknownTag: return "unknown_tag";
    case ParseFailureKind::kEmptyResponse: return "empty_response";
  }
  return "unparseable";
}

std::optional<ParseFailureKind> ParseParseFailureKind(std::string_view name) {
  if (name == "unparseable") return ParseFailureKind::kUnparseable;
  if (name == "unknown_tag") return ParseFailureKind::kUnknownTag;
  if (name == "empty_response") return ParseFailureKind::kEmptyResponse;
  return std::nullopt;
}

std::string FormatAction(const Action& action) {
  switch (action.kind) {
    case ActionKind::kDualPoint: {
      const GestureClass g = ClassifyGesture(action, kDefaultTapThreshold);
      if (g == GestureClass::kTap) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "Action: Click, Location: (%.6f, %.6f)",
                      action.touch->x, action.touch->y);
        return buf;
      }
      std::string dir(ToString(g));
      return "Action: Scroll, Direction: " + dir.substr(dir.find('_') + 1);
    }
    case ActionKind::kTypeText: {
      const std::string& text = *action.text;
      std::string open = "\"", close = "\"";
      if (text.find('"') != std::string::npos) {
        open = close = "'";
        if (text.find('\'') != std::string::npos) {
          open = "\xE2\x80\x9C";
          close = "\xE2\x80\x9D";
        }
      }
      return "Action: Type, Text: " + open + text + close;
    }
    case ActionKind::kPressBack: return "Action: Press, Key: Back";
    case ActionKind::kPressHome: return "Action: Press, Key: Home";
    case ActionKind::kPressEnter: return "Action: Press, Key: Enter";
    case ActionKind::kStatusComplete: return "Action: Status, Task: Complete";
    case ActionKind::kStatusImpossible: return "Action: Status, Task: Impossible";
  }
  return {};
}

Action ScrollAction(GestureClass direction) {
  const Point center{0.5, 0.5};
  Point lift = center;
  switch (direction) {
    case GestureClass::kScrollUp: lift.y -= kScrollMagnitude; break;
    case GestureClass::kScrollDown: lift.y += kScrollMagnitude; break;
    case GestureClass::kScrollLeft: lift.x -= kScrollMagnitude; break;
    case GestureClass::kScrollRight: lift.x += kScrollMagnitude; break;
    case GestureClass::kTap: break;
  }
  return Action::DualPoint(center, lift);
}

ParseOutcome ParseAction(std::string_view text, const som::TaggedScreen* screen) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    return ParseFailure{ParseFailureKind::kEmptyResponse, "empty model output"};
  }
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), Lower);
  const std::string_view view(lower);

  for (std::size_t pos = 0; pos < view.size(); ++pos) {
    if (pos > 0 && IsWordChar(view[pos - 1])) continue;
    for (const VerbWord& v : kVerbs) {
      if (view.substr(pos, v.word.size()) != v.word) continue;
      const std::size_t after = pos + v.word.size();
      if (after < view.size() && IsWordChar(view[after])) continue;
      const std::size_t window =
          v.verb == Verb::kType ? view.size()
                                : std::min(view.size(),
                                           after + (v.verb == Verb::kClick ? kClickWindow : kShortWindow));
      Scanner s(text, view, after, window);
      Attempt result;
      switch (v.verb) {
        case Verb::kClick: result = TryClick(s, screen); break;
        case Verb::kScroll: result = TryScroll(s); break;
        case Verb::kType: result = TryType(s); break;
        case Verb::kPress: result = TryPress(s); break;
        case Verb::kStatus: result = TryStatus(s); break;
      }
      if (result) return *result;
    }
  }
  // A bare reference such as "(ID: 9)" or "Location: (0.3, 0.5)" is a click.
  for (std::size_t start = 0; start < view.size();) {
    if (Attempt result = TryClick(Scanner(text, view, start, view.size()), screen)) {
      return *result;
    }
    const std::size_t newline = view.find('\n', start);
    if (newline == std::string_view::npos) break;
    start = newline + 1;
  }
  return ParseFailure{ParseFailureKind::kUnparseable,
                      "no action directive found in model output"};
}

}  // namespace guinav::agent
