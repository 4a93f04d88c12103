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
#ifndef GUINAV_IMAGE_H_
#define GUINAV_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "guinav/errors.h"

namespace guinav {

class ImageDecodeError : public Error {
 public:
  using Error::Error;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Packed 8-bit RGB raster, row-major.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  // Fills the half-open pixel rectangle [x0, x1) x [y0, y1), clipped.
  void FillRect(int x0, int y0, int x1, int y1, Rgb c);

  std::span<const std::uint8_t> data() const { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

using Bytes = std::vector<std::uint8_t>;

// Any PNG color type is converted to RGB; alpha is dropped.
Image DecodePng(std::span<const std::uint8_t> png);
Bytes EncodePng(const Image& image);

Bytes ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);

}  // namespace guinav

#endif  // GUINAV_IMAGE_H_
