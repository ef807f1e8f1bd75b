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

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "pipeline.hpp"

namespace la3d::pipeline {

double laplacian_energy(const Frame& frame, const BinaryMask& mask) {
  const int w = frame.width();
  const int h = frame.height();
  double energy = 0.0;
  for (int y = 0; y < h; ++y) {
    const auto up = frame.row(std::max(y - 1, 0));
    const auto mid = frame.row(y);
    const auto down = frame.row(std::min(y + 1, h - 1));
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      const int xl = std::max(x - 1, 0);
      const int xr = std::min(x + 1, w - 1);
      for (int c = 0; c < 3; ++c) {
        const int v = up[x * 3 + c] + down[x * 3 + c] + mid[xl * 3 + c] + mid[xr * 3 + c] -
                      4 * mid[x * 3 + c];
        energy += static_cast<double>(v) * v;
      }
    }
  }
  return energy;
}

ProxyMetrics proxy_metrics(const Frame& original, const Frame& anonymized,
                           std::span<const InstanceMask> instances) {
  if (original.width() != anonymized.width() || original.height() != anonymized.height()) {
    fail(ErrorCode::kContractViolation, "proxy metrics need frames of identical dimensions");
  }
  const BinaryMask region = mask_union(instances, original.width(), original.height());
  const auto bits = region.bits();
  const auto a = original.data();
  const auto b = anonymized.data();

  ProxyMetrics m;
  std::array<double, 3> sq{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const std::size_t p = i * 3;
    if (bits[i]) {
      ++m.mask_pixels;
      for (int c = 0; c < 3; ++c) {
        const double d = static_cast<double>(a[p + c]) - b[p + c];
        sq[c] += d * d;
      }
    } else if (a[p] != b[p] || a[p + 1] != b[p + 1] || a[p + 2] != b[p + 2]) {
      ++m.outside_diff;
    }
  }
  if (m.mask_pixels == 0) {
    m.psnr_db = std::numeric_limits<double>::infinity();
    return m;
  }
  for (int c = 0; c < 3; ++c) m.mse[c] = sq[c] / static_cast<double>(m.mask_pixels);
  m.mse_mean = (m.mse[0] + m.mse[1] + m.mse[2]) / 3.0;
  m.psnr_db = m.mse_mean > 0.0 ? 10.0 * std::log10(255.0 * 255.0 / m.mse_mean)
                               : std::numeric_limits<double>::infinity();
  const double e_orig = laplacian_energy(original, region);
  const double e_anon = laplacian_energy(anonymized, region);
  if (e_orig > 0.0) {
    m.hf_ratio = e_anon / e_orig;
  } else {
    m.hf_ratio = e_anon > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return m;
}

}  // namespace la3d::pipeline
