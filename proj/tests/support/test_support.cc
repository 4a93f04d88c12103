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

#include "test_support.h"

#include <atomic>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace guinav::testing {
namespace fs = std::filesystem;

fs::path FixtureDir() { return GUINAV_FIXTURE_DIR; }

fs::path FixtureDataset() { return FixtureDir() / "dataset"; }

ScratchDir::ScratchDir() {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("guinav_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

fs::path CopyFixtureDataset(const fs::path& dir) {
  const fs::path dst = dir / "dataset";
  fs::create_directories(dst);
  fs::copy(FixtureDataset(), dst, fs::copy_options::recursive);
  return dst;
}

Bytes SolidPng(int width, int height, Rgb fill) {
  return EncodePng(Image(width, height, fill));
}

std::vector<UIElement> RandomElements(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<UIElement> out;
  for (int i = 0; i < count; ++i) {
    BBox b;
    b.w = 0.01 + 0.3 * unit(rng);
    b.h = 0.01 + 0.2 * unit(rng);
    b.x = (1.0 - b.w) * unit(rng);
    b.y = (1.0 - b.h) * unit(rng);
    if (rng() % 2 == 0) {
      out.push_back(TextElement(b, "label " + std::to_string(i)));
    } else {
      out.push_back(IconElement(b, "icon_" + std::to_string(rng() % 7)));
    }
  }
  return out;
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

}  // namespace guinav::testing
