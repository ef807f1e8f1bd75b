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

#include "image.hpp"

#include <algorithm>
#include <string>

#include "error.hpp"

namespace la3d {
namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    fail(ErrorCode::kContractViolation,
         "raster dimensions must be >= 1, got " + std::to_string(width) + "x" +
             std::to_string(height));
  }
}

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

}  // namespace

Frame::Frame(int width, int height) : Frame(width, height, Rgb{}) {}

Frame::Frame(int width, int height, Rgb fill) : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.resize(pixel_count() * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

Frame::Frame(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != pixel_count() * 3) {
    fail(ErrorCode::kContractViolation,
         "pixel buffer holds " + std::to_string(pixels_.size()) + " bytes, expected " +
             std::to_string(pixel_count() * 3) + " for " + dims(width, height));
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
  check_dims(width, height);
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
               fill ? 1 : 0);
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width, height);
  if (bits_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    fail(ErrorCode::kContractViolation, "mask buffer size does not match " + dims(width, height));
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

InstanceMask make_instance(BinaryMask mask, int class_id, double score) {
  BBox box = tight_bbox(mask).value_or(BBox{});
  return InstanceMask{std::move(mask), box, class_id, score};
}

std::size_t mask_area(const BinaryMask& mask) noexcept {
  std::size_t n = 0;
  for (std::uint8_t b : mask.bits()) n += b;
  return n;
}

std::size_t mask_area_in(const BinaryMask& mask, const BBox& box) noexcept {
  std::size_t n = 0;
  const auto bits = mask.bits();
  for (int y = box.y; y < box.bottom(); ++y) {
    const std::uint8_t* row = bits.data() + mask.index(box.x, y);
    for (int x = 0; x < box.w; ++x) n += row[x];
  }
  return n;
}

std::optional<BBox> tight_bbox(const BinaryMask& mask) noexcept {
  int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) return std::nullopt;
  return BBox{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

Frame compose_masked(const Frame& frame, const BinaryMask& mask, const Frame& transformed) {
  if (frame.width() != mask.width() || frame.height() != mask.height() ||
      frame.width() != transformed.width() || frame.height() != transformed.height()) {
    fail(ErrorCode::kContractViolation,
         "compose_masked dimension mismatch: frame " + dims(frame.width(), frame.height()) +
             ", mask " + dims(mask.width(), mask.height()) + ", transformed " +
             dims(transformed.width(), transformed.height()));
  }
  Frame out = frame;
  auto dst = out.data();
  const auto src = transformed.data();
  const auto bits = mask.bits();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    dst[i * 3] = src[i * 3];
    dst[i * 3 + 1] = src[i * 3 + 1];
    dst[i * 3 + 2] = src[i * 3 + 2];
  }
  return out;
}

void compose_masked_in_box(Frame& target, const BinaryMask& mask, const BBox& box,
                           const Frame& patch) {
  if (target.width() != mask.width() || target.height() != mask.height()) {
    fail(ErrorCode::kContractViolation, "mask " + dims(mask.width(), mask.height()) +
                                            " does not match frame " +
                                            dims(target.width(), target.height()));
  }
  if (!box.fits_within(target.width(), target.height()) || patch.width() != box.w ||
      patch.height() != box.h) {
    fail(ErrorCode::kContractViolation, "patch/box mismatch in masked composition");
  }
  const auto bits = mask.bits();
  for (int y = 0; y < box.h; ++y) {
    const std::uint8_t* m = bits.data() + mask.index(box.x, box.y + y);
    const std::uint8_t* src = patch.row(y).data();
    std::uint8_t* dst = target.row(box.y + y).data() + static_cast<std::size_t>(box.x) * 3;
    for (int x = 0; x < box.w; ++x) {
      if (!m[x]) continue;
      dst[x * 3] = src[x * 3];
      dst[x * 3 + 1] = src[x * 3 + 1];
      dst[x * 3 + 2] = src[x * 3 + 2];
    }
  }
}

Frame crop(const Frame& frame, const BBox& box) {
  if (box.empty() || !box.fits_within(frame.width(), frame.height())) {
    fail(ErrorCode::kContractViolation,
         "crop box [" + std::to_string(box.x) + "," + std::to_string(box.y) + "," +
             std::to_string(box.w) + "," + std::to_string(box.h) + "] outside frame " +
             dims(frame.width(), frame.height()));
  }
  Frame out(box.w, box.h);
  const std::size_t bytes = static_cast<std::size_t>(box.w) * 3;
  for (int y = 0; y < box.h; ++y) {
    const auto src = frame.row(box.y + y).subspan(static_cast<std::size_t>(box.x) * 3, bytes);
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

Frame paste(const Frame& frame, const BBox& box, const Frame& patch) {
  if (box.empty() || !box.fits_within(frame.width(), frame.height())) {
    fail(ErrorCode::kContractViolation, "paste box outside frame " +
                                            dims(frame.width(), frame.height()));
  }
  if (patch.width() != box.w || patch.height() != box.h) {
    fail(ErrorCode::kContractViolation, "paste patch " + dims(patch.width(), patch.height()) +
                                            " does not match box " + dims(box.w, box.h));
  }
  Frame out = frame;
  for (int y = 0; y < box.h; ++y) {
    const auto src = patch.row(y);
    std::copy(src.begin(), src.end(),
              out.row(box.y + y).begin() + static_cast<std::ptrdiff_t>(box.x) * 3);
  }
  return out;
}

BinaryMask mask_union(std::span<const InstanceMask> instances, int width, int height) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * height, 0);
  for (const auto& inst : instances) {
    if (inst.mask.width() != width || inst.mask.height() != height) {
      fail(ErrorCode::kContractViolation, "instance mask " +
                                              dims(inst.mask.width(), inst.mask.height()) +
                                              " does not match frame " + dims(width, height));
    }
    const auto src = inst.mask.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] |= src[i];
  }
  return BinaryMask(width, height, std::move(bits));
}

}  // namespace la3d
