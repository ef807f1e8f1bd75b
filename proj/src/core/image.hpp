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

#pragma once

// Raster and mask primitives. Coordinates are row-major with the origin at
// the top-left pixel; x grows to the right and y grows downwards.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace la3d {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// 8-bit interleaved RGB raster. Always at least 1x1.
class Frame {
 public:
  Frame(int width, int height);
  Frame(int width, int height, Rgb fill);
  Frame(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<const std::uint8_t> data() const noexcept { return pixels_; }
  std::span<std::uint8_t> data() noexcept { return pixels_; }

  std::span<const std::uint8_t> row(int y) const noexcept {
    return std::span<const std::uint8_t>(pixels_).subspan(row_offset(y), row_bytes());
  }
  std::span<std::uint8_t> row(int y) noexcept {
    return std::span<std::uint8_t>(pixels_).subspan(row_offset(y), row_bytes());
  }

  Rgb at(int x, int y) const noexcept {
    const std::uint8_t* p = &pixels_[offset(x, y)];
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb c) noexcept {
    std::uint8_t* p = &pixels_[offset(x, y)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t row_bytes() const noexcept { return static_cast<std::size_t>(width_) * 3; }
  std::size_t row_offset(int y) const noexcept { return static_cast<std::size_t>(y) * row_bytes(); }

  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

// Row-major boolean occupancy, one byte per pixel (0 or 1).
class BinaryMask {
 public:
  BinaryMask(int width, int height, bool fill = false);
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  bool at(int x, int y) const noexcept { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool v) noexcept { bits_[index(x, y)] = v ? 1 : 0; }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

// Axis-aligned rectangle; x and y are inclusive, w and h are extents.
struct BBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const noexcept { return x + w; }
  int bottom() const noexcept { return y + h; }
  bool empty() const noexcept { return w <= 0 || h <= 0; }
  bool contains(int px, int py) const noexcept {
    return px >= x && px < x + w && py >= y && py < y + h;
  }
  bool fits_within(int width, int height) const noexcept {
    return x >= 0 && y >= 0 && w >= 0 && h >= 0 && x + w <= width && y + h <= height;
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

// One detected object. `box` is the tight bounding rectangle of `mask`; an
// empty mask carries an all-zero box.
struct InstanceMask {
  BinaryMask mask;
  BBox box;
  int class_id = 0;
  double score = 1.0;
};

// Builds an instance from a mask, deriving the tight box.
InstanceMask make_instance(BinaryMask mask, int class_id = 0, double score = 1.0);

std::size_t mask_area(const BinaryMask& mask) noexcept;

// Area counted only inside `box`; equals mask_area when the box is tight.
std::size_t mask_area_in(const BinaryMask& mask, const BBox& box) noexcept;

// Minimal rectangle covering every true bit, or nullopt for an empty mask.
std::optional<BBox> tight_bbox(const BinaryMask& mask) noexcept;

// Per-pixel select: transformed where the mask is set, frame elsewhere.
Frame compose_masked(const Frame& frame, const BinaryMask& mask, const Frame& transformed);

// In-place variant restricted to `box`; `patch` has the box's dimensions and
// is written to `target` wherever the mask is set.
void compose_masked_in_box(Frame& target, const BinaryMask& mask, const BBox& box,
                           const Frame& patch);

Frame crop(const Frame& frame, const BBox& box);
Frame paste(const Frame& frame, const BBox& box, const Frame& patch);

// Union of several masks of identical dimensions.
BinaryMask mask_union(std::span<const InstanceMask> instances, int width, int height);

}  // namespace la3d
