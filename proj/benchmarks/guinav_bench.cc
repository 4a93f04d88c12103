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

#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "guinav/action_parser.h"
#include "guinav/evaluator.h"
#include "guinav/image.h"
#include "guinav/som.h"

namespace guinav {
namespace {

std::vector<UIElement> Grid(int n) {
  std::vector<UIElement> out;
  for (int i = 0; i < n; ++i) {
    const double x = 0.1 * (i % 9);
    const double y = 0.1 * (i / 9 % 9);
    out.push_back(TextElement({x, y, 0.08, 0.05}, "item " + std::to_string(i)));
  }
  return out;
}

void BM_MatchStepTap(benchmark::State& state) {
  const std::vector<UIElement> els = Grid(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Action> preds;
  for (int i = 0; i < 1024; ++i) preds.push_back(Action::Tap({unit(rng), unit(rng)}));
  const Action gold = Action::Tap({0.5, 0.5});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::MatchStep(preds[i++ % preds.size()], gold, els));
  }
}
BENCHMARK(BM_MatchStepTap)->Arg(0)->Arg(16)->Arg(64);

void BM_ParseAction(benchmark::State& state) {
  const Image raw(360, 640, {240, 240, 240});
  const som::TaggedScreen screen = som::Annotate(raw, Grid(40), som::TagStyle::Center());
  const std::string inputs[] = {
      "Action: Click, ID: 17",
      "The dismiss button looks right (ID: 9), so I pick it.",
      "Reasoning: the field is empty.\nAction: Type, Text: \"milk frother\"",
      "Nothing useful here at all, just prose without any directive in it.",
  };
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(agent::ParseAction(inputs[i++ % 4], &screen));
  }
}
BENCHMARK(BM_ParseAction);

void BM_Annotate(benchmark::State& state) {
  const auto png = std::make_shared<const Bytes>(EncodePng(Image(1080, 1920, {250, 250, 250})));
  const std::vector<UIElement> els = Grid(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(som::Annotate(png, els, som::TagStyle::BySide()));
  }
}
BENCHMARK(BM_Annotate)->Arg(10)->Arg(60)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace guinav

BENCHMARK_MAIN();
