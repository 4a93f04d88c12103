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

#include "guinav/image.h"

#include <png.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <string>

namespace guinav {

Image::Image(int width, int height, Rgb fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw ContractViolation("negative image size");
  pixels_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

Rgb Image::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  pixels_[i] = c.r;
  pixels_[i + 1] = c.g;
  pixels_[i + 2] = c.b;
}

void Image::FillRect(int x0, int y0, int x1, int y1, Rgb c) {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, width_);
  y1 = std::min(y1, height_);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) set(x, y, c);
  }
}

Image DecodePng(std::span<const std::uint8_t> png) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_memory(&img, png.data(), png.size()) == 0) {
    throw ImageDecodeError(std::string("PNG decode failed: ") + img.message);
  }
  img.format = PNG_FORMAT_RGB;
  Image out(static_cast<int>(img.width), static_cast<int>(img.height));
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(img));
  if (png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr) == 0) {
    std::string message = img.message;
    png_image_free(&img);
    throw ImageDecodeError("PNG decode failed: " + message);
  }
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * out.width() + x) * 3;
      out.set(x, y, {buffer[i], buffer[i + 1], buffer[i + 2]});
    }
  }
  return out;
}

Bytes EncodePng(const Image& image) {
  if (image.empty()) throw ContractViolation("cannot encode an empty image");
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_RGB;
  img.flags = PNG_IMAGE_FLAG_FAST;
  png_alloc_size_t size = 0;
  if (png_image_write_to_memory(&img, nullptr, &size, 0, image.data().data(),
                                0, nullptr) == 0) {
    throw Error(std::string("PNG encode failed: ") + img.message);
  }
  Bytes out(size);
  if (png_image_write_to_memory(&img, out.data(), &size, 0,
                                image.data().data(), 0, nullptr) == 0) {
    throw Error(std::string("PNG encode failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

Bytes ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace guinav
