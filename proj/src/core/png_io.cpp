// Copyright 2026 The LA3D Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "png_io.hpp"

#include <png.h>

#include <cstring>
#include <string>

#include "error.hpp"

namespace la3d::io {
namespace {

struct ImageGuard {
  png_image image;
  ImageGuard() {
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
  }
  ~ImageGuard() { png_image_free(&image); }
  ImageGuard(const ImageGuard&) = delete;
  ImageGuard& operator=(const ImageGuard&) = delete;
};

std::vector<std::uint8_t> read_raw(const std::filesystem::path& path, png_uint_32 format,
                                   int& width, int& height, ErrorCode code) {
  ImageGuard g;
  if (!png_image_begin_read_from_file(&g.image, path.c_str())) {
    fail(code, path.string() + ": " + g.image.message);
  }
  g.image.format = format;
  width = static_cast<int>(g.image.width);
  height = static_cast<int>(g.image.height);
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(g.image));
  if (!png_image_finish_read(&g.image, nullptr, buf.data(), 0, nullptr)) {
    fail(code, path.string() + ": " + g.image.message);
  }
  return buf;
}

void write_raw(const std::filesystem::path& path, png_uint_32 format, int width, int height,
               const std::uint8_t* data, ErrorCode code) {
  ImageGuard g;
  g.image.width = static_cast<png_uint_32>(width);
  g.image.height = static_cast<png_uint_32>(height);
  g.image.format = format;
  if (!png_image_write_to_file(&g.image, path.c_str(), 0, data, 0, nullptr)) {
    fail(code, path.string() + ": " + g.image.message);
  }
}

}  // namespace

Frame read_png(const std::filesystem::path& path) {
  int w = 0, h = 0;
  auto buf = read_raw(path, PNG_FORMAT_RGB, w, h, ErrorCode::kInputUnreadable);
  return Frame(w, h, std::move(buf));
}

void write_png(const std::filesystem::path& path, const Frame& frame) {
  write_raw(path, PNG_FORMAT_RGB, frame.width(), frame.height(), frame.data().data(),
            ErrorCode::kOutputUnwritable);
}

GrayImage read_png_gray(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    fail(ErrorCode::kNotFound, path.string() + ": no such file");
  }
  GrayImage img;
  img.pixels = read_raw(path, PNG_FORMAT_GRAY, img.width, img.height, ErrorCode::kFormat);
  return img;
}

void write_png_gray(const std::filesystem::path& path, const GrayImage& image) {
  write_raw(path, PNG_FORMAT_GRAY, image.width, image.height, image.pixels.data(),
            ErrorCode::kOutputUnwritable);
}

}  // namespace la3d::io
