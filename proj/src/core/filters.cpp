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

#include "filters.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>

#include "error.hpp"

namespace la3d::filters {

GaussianKernel::GaussianKernel(int size, double sigma) : sigma_(sigma) {
  if (size < 1 || size % 2 == 0) {
    fail(ErrorCode::kInvalidArgument,
         "gaussian kernel size must be odd and positive, got " + std::to_string(size));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    fail(ErrorCode::kInvalidArgument,
         "gaussian sigma must be positive, got " + std::to_string(sigma));
  }
  const int r = size / 2;
  std::vector<double> raw(static_cast<std::size_t>(r) + 1);
  const double denom = 2.0 * sigma * sigma;
  for (int d = 0; d <= r; ++d) raw[d] = std::exp(-static_cast<double>(d) * d / denom);

  // Sum from the tails inwards so small terms are not absorbed early.
  double sum = raw[0];
  for (int d = r; d >= 1; --d) sum += 2.0 * raw[d];

  coefficients_.resize(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) coefficients_[i] = raw[std::abs(i - r)] / sum;
}

namespace {

inline std::uint8_t round_clamp(float v) {
  // Inputs are non-negative, so floor(v + 0.5) rounds half away from zero.
  const float r = std::floor(v + 0.5f);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0f, 255.0f));
}

std::vector<float> to_float_taps(const GaussianKernel& k) {
  std::vector<float> taps(k.coefficients().size());
  for (std::size_t i = 0; i < taps.size(); ++i) taps[i] = static_cast<float>(k.coefficients()[i]);
  return taps;
}

// One row of the horizontal pass over interleaved RGB floats. `padded` holds
// the row with `r` replicated pixels on each side.
void convolve_row(const float* padded, float* out, std::size_t n, const float* taps, int r) {
  const float center = taps[r];
  const float* mid = padded + static_cast<std::size_t>(r) * 3;
  for (std::size_t i = 0; i < n; ++i) out[i] = center * mid[i];
  for (int j = 0; j < r; ++j) {
    const float t = taps[j];
    const float* lo = padded + static_cast<std::size_t>(j) * 3;
    const float* hi = padded + static_cast<std::size_t>(2 * r - j) * 3;
    for (std::size_t i = 0; i < n; ++i) out[i] += t * (lo[i] + hi[i]);
  }
}

}  // namespace

Frame gaussian_blur(const Frame& frame, const GaussianKernel& kernel_h,
                    const GaussianKernel& kernel_v) {
  const int w = frame.width();
  const int h = frame.height();
  const std::size_t row_n = static_cast<std::size_t>(w) * 3;
  if (kernel_h.size() == 1 && kernel_v.size() == 1) return frame;

  const auto th = to_float_taps(kernel_h);
  const auto tv = to_float_taps(kernel_v);
  const int rh = kernel_h.radius();
  const int rv = kernel_v.radius();

  std::vector<float> tmp(row_n * static_cast<std::size_t>(h));
  std::vector<float> padded(static_cast<std::size_t>(w + 2 * rh) * 3);
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* src = frame.row(y).data();
    for (int x = -rh; x < w + rh; ++x) {
      const int sx = std::clamp(x, 0, w - 1);
      float* p = &padded[static_cast<std::size_t>(x + rh) * 3];
      p[0] = src[sx * 3];
      p[1] = src[sx * 3 + 1];
      p[2] = src[sx * 3 + 2];
    }
    convolve_row(padded.data(), &tmp[row_n * y], row_n, th.data(), rh);
  }

  Frame out(w, h);
  std::vector<float> acc(row_n);
  auto tmp_row = [&](int y) { return &tmp[row_n * static_cast<std::size_t>(std::clamp(y, 0, h - 1))]; };
  for (int y = 0; y < h; ++y) {
    const float* mid = tmp_row(y);
    const float center = tv[rv];
    for (std::size_t i = 0; i < row_n; ++i) acc[i] = center * mid[i];
    for (int j = 0; j < rv; ++j) {
      const float t = tv[j];
      const float* lo = tmp_row(y + j - rv);
      const float* hi = tmp_row(y + rv - j);
      for (std::size_t i = 0; i < row_n; ++i) acc[i] += t * (lo[i] + hi[i]);
    }
    std::uint8_t* dst = out.row(y).data();
    for (std::size_t i = 0; i < row_n; ++i) dst[i] = round_clamp(acc[i]);
  }
  return out;
}

Frame pixelize(const Frame& frame, int block_x, int block_y) {
  if (block_x < 1 || block_y < 1) {
    fail(ErrorCode::kInvalidArgument, "pixelize factors must be >= 1, got " +
                                          std::to_string(block_x) + "," + std::to_string(block_y));
  }
  const int w = frame.width();
  const int h = frame.height();
  if (block_x == 1 && block_y == 1) return frame;

  const int cells_x = (w + block_x - 1) / block_x;
  std::vector<std::uint64_t> sums(static_cast<std::size_t>(cells_x) * 3);
  Frame out(w, h);
  for (int y0 = 0; y0 < h; y0 += block_y) {
    const int y1 = std::min(y0 + block_y, h);
    std::fill(sums.begin(), sums.end(), std::uint64_t{0});
    for (int y = y0; y < y1; ++y) {
      const std::uint8_t* src = frame.row(y).data();
      for (int x = 0; x < w; ++x) {
        std::uint64_t* s = &sums[static_cast<std::size_t>(x / block_x) * 3];
        s[0] += src[x * 3];
        s[1] += src[x * 3 + 1];
        s[2] += src[x * 3 + 2];
      }
    }
    std::vector<std::uint8_t> cell_colors(sums.size());
    for (int cx = 0; cx < cells_x; ++cx) {
      const int x0 = cx * block_x;
      const std::uint64_t n =
          static_cast<std::uint64_t>(std::min(x0 + block_x, w) - x0) * static_cast<std::uint64_t>(y1 - y0);
      for (int c = 0; c < 3; ++c) {
        const std::uint64_t s = sums[static_cast<std::size_t>(cx) * 3 + c];
        cell_colors[static_cast<std::size_t>(cx) * 3 + c] =
            static_cast<std::uint8_t>((2 * s + n) / (2 * n));
      }
    }
    for (int y = y0; y < y1; ++y) {
      std::uint8_t* dst = out.row(y).data();
      for (int x = 0; x < w; ++x) {
        const std::uint8_t* c = &cell_colors[static_cast<std::size_t>(x / block_x) * 3];
        dst[x * 3] = c[0];
        dst[x * 3 + 1] = c[1];
        dst[x * 3 + 2] = c[2];
      }
    }
  }
  return out;
}

Rgb mean_color(const Frame& frame) {
  std::uint64_t s[3] = {0, 0, 0};
  const auto d = frame.data();
  for (std::size_t i = 0; i < d.size(); i += 3) {
    s[0] += d[i];
    s[1] += d[i + 1];
    s[2] += d[i + 2];
  }
  const std::uint64_t n = frame.pixel_count();
  auto avg = [n](std::uint64_t v) { return static_cast<std::uint8_t>((2 * v + n) / (2 * n)); };
  return {avg(s[0]), avg(s[1]), avg(s[2])};
}

Frame blacken(const Frame& frame) { return Frame(frame.width(), frame.height(), Rgb{0, 0, 0}); }

std::vector<int> luma(const Frame& frame) {
  std::vector<int> out(frame.pixel_count());
  const auto d = frame.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (299 * d[i * 3] + 587 * d[i * 3 + 1] + 114 * d[i * 3 + 2] + 500) / 1000;
  }
  return out;
}

BinaryMask canny_edges(const Frame& frame, const CannyParams& params) {
  if (!(params.low_threshold > 0.0) || params.low_threshold > params.high_threshold) {
    fail(ErrorCode::kInvalidArgument, "canny thresholds must satisfy 0 < low <= high");
  }
  const int w = frame.width();
  const int h = frame.height();
  const auto gray = luma(frame);
  auto px = [&](int x, int y) {
    return gray[static_cast<std::size_t>(std::clamp(y, 0, h - 1)) * w + std::clamp(x, 0, w - 1)];
  };

  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<int> gx(n), gy(n), mag(n);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int a = px(x - 1, y - 1), b = px(x, y - 1), c = px(x + 1, y - 1);
      const int d = px(x - 1, y), f = px(x + 1, y);
      const int g = px(x - 1, y + 1), hh = px(x, y + 1), k = px(x + 1, y + 1);
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      gx[i] = (c + 2 * f + k) - (a + 2 * d + g);
      gy[i] = (g + 2 * hh + k) - (a + 2 * b + c);
      mag[i] = std::abs(gx[i]) + std::abs(gy[i]);
    }
  }
  auto mag_at = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0;
    return mag[static_cast<std::size_t>(y) * w + x];
  };

  constexpr double kTan22 = 0.41421356237309503;
  constexpr double kTan67 = 2.4142135623730949;
  // 0 = none, 1 = weak, 2 = strong.
  std::vector<std::uint8_t> state(n, 0);
  std::vector<std::size_t> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const int m = mag[i];
      if (static_cast<double>(m) <= params.low_threshold) continue;
      const double ax = std::abs(gx[i]);
      const double ay = std::abs(gy[i]);
      bool is_max;
      if (ay < ax * kTan22) {
        is_max = m > mag_at(x - 1, y) && m >= mag_at(x + 1, y);
      } else if (ay > ax * kTan67) {
        is_max = m > mag_at(x, y - 1) && m >= mag_at(x, y + 1);
      } else {
        const int s = ((gx[i] < 0) != (gy[i] < 0)) ? -1 : 1;
        is_max = m > mag_at(x - s, y - 1) && m >= mag_at(x + s, y + 1);
      }
      if (!is_max) continue;
      if (static_cast<double>(m) > params.high_threshold) {
        state[i] = 2;
        stack.push_back(i);
      } else {
        state[i] = 1;
      }
    }
  }

  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % w);
    const int y = static_cast<int>(i / w);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
        if (state[j] == 1) {
          state[j] = 2;
          stack.push_back(j);
        }
      }
    }
  }

  std::vector<std::uint8_t> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = state[i] == 2 ? 1 : 0;
  return BinaryMask(w, h, std::move(bits));
}

Frame blacken_edged(const Frame& frame, const CannyParams& params) {
  const BinaryMask edges = canny_edges(frame, params);
  Frame out(frame.width(), frame.height(), Rgb{0, 0, 0});
  const auto bits = edges.bits();
  auto d = out.data();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    d[i * 3] = d[i * 3 + 1] = d[i * 3 + 2] = 255;
  }
  return out;
}

}  // namespace la3d::filters
