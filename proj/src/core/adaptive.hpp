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

// Size-adaptive anonymization: per-instance strength scaling by the relative
// mask area, the boundary rules on kernel sizes and downsizing factors, and
// the per-instance anonymize-and-composite loop.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "filters.hpp"
#include "image.hpp"

namespace la3d {

enum class MethodKind {
  kRaw,
  kBlackened,
  kBlackenedEdged,
  kBlurred,
  kPixelized,
  kBlurredAdaptive,
  kPixelizedAdaptive,
};

const char* method_kind_name(MethodKind kind) noexcept;
std::optional<MethodKind> parse_method_kind(std::string_view name) noexcept;

struct Resolution {
  int width = 0;
  int height = 0;

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct BlurBase {
  int k_h = 13;
  int k_w = 13;
  double sigma = 10.0;
};

struct PixelizeBase {
  int d = 4;
};

struct AdaptiveParams {
  double alpha_r = 1.0;
  double alpha_b = 0.5;
  bool ismax = false;
  bool isfullblur = false;
  // When set, alpha_r is derived per frame as the area ratio Z / Z_ref.
  std::optional<Resolution> z_ref;

  double effective_alpha_r(int frame_width, int frame_height) const noexcept;
};

struct AnonymizerSpec {
  std::string preset_name;
  MethodKind kind = MethodKind::kRaw;
  BlurBase blur;
  PixelizeBase pixelize;
  filters::CannyParams canny;
  AdaptiveParams adaptive;

  bool is_adaptive() const noexcept {
    return kind == MethodKind::kBlurredAdaptive || kind == MethodKind::kPixelizedAdaptive;
  }
};

// Throws kInvalidArgument when parameters are inconsistent with the kind.
void validate_spec(const AnonymizerSpec& spec);

namespace adaptive {

// r = max(alpha_r * ln(100 * mask_area / frame_area), 1).
double scaling_factor(std::size_t mask_area, std::size_t frame_area, double alpha_r);

// Throws kDegenerateInput for an empty mask and kContractViolation when the
// mask does not match the frame.
double adaptive_scaler(const Frame& frame, const BinaryMask& mask, double alpha_r);

// OpenCV's default sigma for a kernel size: 0.3 * (0.5 * (k - 1) - 1) + 0.8.
double sigma_from_kernel(int k) noexcept;

// floor(v), decremented when even, then raised to floor_k.
int odd_floor(double v, int floor_k) noexcept;

struct BlurPlan {
  int k_h = 1;
  int k_w = 1;
  double sigma = 1.0;

  friend bool operator==(const BlurPlan&, const BlurPlan&) = default;
};

struct PixelizePlan {
  int d_x = 1;
  int d_y = 1;

  friend bool operator==(const PixelizePlan&, const PixelizePlan&) = default;
};

BlurPlan plan_blur(int crop_width, int crop_height, const BlurBase& base, double r,
                   const AdaptiveParams& params);
PixelizePlan plan_pixelize(int crop_width, int crop_height, const PixelizeBase& base, double r,
                           const AdaptiveParams& params);

Frame adaptive_blur(const Frame& crop, const BlurBase& base, double r,
                    const AdaptiveParams& params);
Frame adaptive_pixelize(const Frame& crop, const PixelizeBase& base, double r,
                        const AdaptiveParams& params);

}  // namespace adaptive

struct StageTimes {
  double transform_us = 0.0;
  double compose_us = 0.0;
};

struct AnonymizeResult {
  Frame frame;
  // One entry per processed (non-empty) instance for adaptive kinds.
  std::vector<double> r_values;
  std::size_t processed = 0;
  StageTimes times;
};

// Applies `spec` to each instance in order. Each instance reads the frame as
// left by the previous one; pixels outside every mask are never written.
AnonymizeResult anonymize_instances(const Frame& frame, std::span<const InstanceMask> instances,
                                    const AnonymizerSpec& spec, bool measure_stages = false);

}  // namespace la3d
