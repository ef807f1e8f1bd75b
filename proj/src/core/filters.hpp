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

#include <vector>

#include "image.hpp"

namespace la3d::filters {

// Normalized, symmetric 1-D Gaussian taps.
class GaussianKernel {
 public:
  // Throws kInvalidArgument unless `size` is odd and positive and sigma > 0.
  GaussianKernel(int size, double sigma);

  int size() const noexcept { return static_cast<int>(coefficients_.size()); }
  int radius() const noexcept { return size() / 2; }
  double sigma() const noexcept { return sigma_; }
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }

 private:
  double sigma_;
  std::vector<double> coefficients_;
};

inline GaussianKernel build_gaussian_kernel(int size, double sigma) {
  return GaussianKernel(size, sigma);
}

// Separable smoothing with edge replication at the borders. Horizontal pass
// first, float accumulation, round half away from zero, clamp to [0, 255].
Frame gaussian_blur(const Frame& frame, const GaussianKernel& kernel_h,
                    const GaussianKernel& kernel_v);

// Area-average downsampling on a grid of block_x by block_y cells anchored at
// the origin, followed by nearest upsampling back to the input size. Partial
// edge cells average only the pixels they contain. Each cell mean is rounded
// half up.
Frame pixelize(const Frame& frame, int block_x, int block_y);

// Mean colour of the whole frame, rounded half up per channel.
Rgb mean_color(const Frame& frame);

Frame blacken(const Frame& frame);

struct CannyParams {
  double low_threshold = 100.0;
  double high_threshold = 200.0;
};

// Luma used by the edge detector: round((299 R + 587 G + 114 B) / 1000).
std::vector<int> luma(const Frame& frame);

// Sobel 3x3 (replicated border), L1 magnitude, 4-direction non-maximum
// suppression, double threshold and 8-connected hysteresis. No pre-blur.
BinaryMask canny_edges(const Frame& frame, const CannyParams& params);

// Black silhouette with the crop's edges drawn in white.
Frame blacken_edged(const Frame& frame, const CannyParams& params);

}  // namespace la3d::filters
