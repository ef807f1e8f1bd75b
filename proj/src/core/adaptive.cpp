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

#include "adaptive.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "error.hpp"

namespace la3d {

const char* method_kind_name(MethodKind kind) noexcept {
  switch (kind) {
    case MethodKind::kRaw: return "raw";
    case MethodKind::kBlackened: return "blackened";
    case MethodKind::kBlackenedEdged: return "blackened_edged";
    case MethodKind::kBlurred: return "blurred";
    case MethodKind::kPixelized: return "pixelized";
    case MethodKind::kBlurredAdaptive: return "blurred_adaptive";
    case MethodKind::kPixelizedAdaptive: return "pixelized_adaptive";
  }
  return "unknown";
}

std::optional<MethodKind> parse_method_kind(std::string_view name) noexcept {
  for (MethodKind k : {MethodKind::kRaw, MethodKind::kBlackened, MethodKind::kBlackenedEdged,
                       MethodKind::kBlurred, MethodKind::kPixelized,
                       MethodKind::kBlurredAdaptive, MethodKind::kPixelizedAdaptive}) {
    if (name == method_kind_name(k)) return k;
  }
  return std::nullopt;
}

double AdaptiveParams::effective_alpha_r(int frame_width, int frame_height) const noexcept {
  if (!z_ref) return alpha_r;
  return (static_cast<double>(frame_width) * frame_height) /
         (static_cast<double>(z_ref->width) * z_ref->height);
}

void validate_spec(const AnonymizerSpec& spec) {
  auto bad = [&](const std::string& what) {
    fail(ErrorCode::kInvalidArgument, "spec '" + spec.preset_name + "': " + what);
  };
  switch (spec.kind) {
    case MethodKind::kBlurred:
    case MethodKind::kBlurredAdaptive:
      if (spec.blur.k_h < 1 || spec.blur.k_h % 2 == 0 || spec.blur.k_w < 1 ||
          spec.blur.k_w % 2 == 0) {
        bad("blur kernel sizes must be odd and >= 1");
      }
      if (!(spec.blur.sigma > 0.0)) bad("blur sigma must be > 0");
      break;
    case MethodKind::kPixelized:
    case MethodKind::kPixelizedAdaptive:
      if (spec.pixelize.d < 1) bad("downsizing factor must be >= 1");
      break;
    case MethodKind::kBlackenedEdged:
      if (!(spec.canny.low_threshold > 0.0) ||
          spec.canny.low_threshold > spec.canny.high_threshold) {
        bad("canny thresholds must satisfy 0 < low <= high");
      }
      break;
    case MethodKind::kRaw:
    case MethodKind::kBlackened:
      break;
  }
  if (spec.is_adaptive()) {
    const auto& a = spec.adaptive;
    if (!(a.alpha_r > 0.0) && !a.z_ref) bad("alpha_r must be > 0");
    if (!(a.alpha_b > 0.0) || a.alpha_b > 1.0) bad("alpha_b must lie in (0, 1]");
    if (a.z_ref && (a.z_ref->width < 1 || a.z_ref->height < 1)) bad("z_ref must be >= 1x1");
  }
}

namespace adaptive {

double scaling_factor(std::size_t mask_area, std::size_t frame_area, double alpha_r) {
  if (mask_area == 0) fail(ErrorCode::kDegenerateInput, "scaling factor of an empty mask");
  if (mask_area > frame_area) {
    fail(ErrorCode::kContractViolation, "mask area exceeds frame area");
  }
  if (!(alpha_r > 0.0)) fail(ErrorCode::kInvalidArgument, "alpha_r must be positive");
  const double rel = 100.0 * static_cast<double>(mask_area) / static_cast<double>(frame_area);
  return std::max(alpha_r * std::log(rel), 1.0);
}

double adaptive_scaler(const Frame& frame, const BinaryMask& mask, double alpha_r) {
  if (mask.width() != frame.width() || mask.height() != frame.height()) {
    fail(ErrorCode::kContractViolation, "mask dimensions do not match frame");
  }
  return scaling_factor(mask_area(mask), frame.pixel_count(), alpha_r);
}

double sigma_from_kernel(int k) noexcept { return 0.3 * (0.5 * (k - 1) - 1.0) + 0.8; }

int odd_floor(double v, int floor_k) noexcept {
  long long k = static_cast<long long>(std::floor(v));
  if (k % 2 == 0) --k;
  return static_cast<int>(std::max<long long>(k, floor_k));
}

namespace {

int odd_down(int v) { return std::max(v % 2 == 0 ? v - 1 : v, 1); }

}  // namespace

BlurPlan plan_blur(int crop_width, int crop_height, const BlurBase& base, double r,
                   const AdaptiveParams& params) {
  BlurPlan plan;
  if (params.ismax) {
    plan.k_h = odd_down(crop_height);
    plan.k_w = odd_down(crop_width);
    plan.sigma = sigma_from_kernel(std::max(plan.k_h, plan.k_w));
    return plan;
  }
  const int cap_h = odd_floor(std::max(params.alpha_b * crop_height, 1.0), 1);
  const int cap_w = odd_floor(std::max(params.alpha_b * crop_width, 1.0), 1);
  plan.k_h = std::min(odd_floor(r * base.k_h, base.k_h), cap_h);
  plan.k_w = std::min(odd_floor(r * base.k_w, base.k_w), cap_w);
  const double sigma = params.isfullblur ? r * base.sigma : base.sigma;
  plan.sigma = std::min(sigma, static_cast<double>(std::max(plan.k_h, plan.k_w)));
  return plan;
}

PixelizePlan plan_pixelize(int crop_width, int crop_height, const PixelizeBase& base, double r,
                           const AdaptiveParams& params) {
  if (params.ismax) return {crop_width, crop_height};
  const int raw = static_cast<int>(std::floor(r * base.d));
  const int cap_x = std::max(static_cast<int>(std::floor(params.alpha_b * crop_width)), 1);
  const int cap_y = std::max(static_cast<int>(std::floor(params.alpha_b * crop_height)), 1);
  return {std::min(raw, cap_x), std::min(raw, cap_y)};
}

Frame adaptive_blur(const Frame& crop, const BlurBase& base, double r,
                    const AdaptiveParams& params) {
  const BlurPlan plan = plan_blur(crop.width(), crop.height(), base, r, params);
  return filters::gaussian_blur(crop, filters::GaussianKernel(plan.k_w, plan.sigma),
                                filters::GaussianKernel(plan.k_h, plan.sigma));
}

Frame adaptive_pixelize(const Frame& crop, const PixelizeBase& base, double r,
                        const AdaptiveParams& params) {
  const PixelizePlan plan = plan_pixelize(crop.width(), crop.height(), base, r, params);
  return filters::pixelize(crop, plan.d_x, plan.d_y);
}

}  // namespace adaptive

namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
}

}  // namespace

AnonymizeResult anonymize_instances(const Frame& frame, std::span<const InstanceMask> instances,
                                    const AnonymizerSpec& spec, bool measure_stages) {
  AnonymizeResult result{frame, {}, 0, {}};
  for (const auto& inst : instances) {
    if (inst.mask.width() != frame.width() || inst.mask.height() != frame.height()) {
      fail(ErrorCode::kContractViolation,
           "instance mask " + std::to_string(inst.mask.width()) + "x" +
               std::to_string(inst.mask.height()) + " does not match frame " +
               std::to_string(frame.width()) + "x" + std::to_string(frame.height()));
    }
    if (!inst.box.fits_within(frame.width(), frame.height())) {
      fail(ErrorCode::kContractViolation, "instance box lies outside the frame");
    }
  }
  if (spec.kind == MethodKind::kRaw) return result;
  validate_spec(spec);

  // Fixed kernels are shared by every instance.
  std::optional<filters::GaussianKernel> fixed_h, fixed_v;
  if (spec.kind == MethodKind::kBlurred) {
    fixed_h.emplace(spec.blur.k_w, spec.blur.sigma);
    fixed_v.emplace(spec.blur.k_h, spec.blur.sigma);
  }
  const double alpha_r = spec.adaptive.effective_alpha_r(frame.width(), frame.height());

  Frame& work = result.frame;
  for (const auto& inst : instances) {
    if (inst.box.empty()) continue;
    Clock::time_point t0;
    if (measure_stages) t0 = Clock::now();

    const std::size_t area = mask_area_in(inst.mask, inst.box);
    if (area == 0) continue;
    std::optional<double> r;
    if (spec.is_adaptive()) r = adaptive::scaling_factor(area, frame.pixel_count(), alpha_r);

    Frame patch = crop(work, inst.box);
    switch (spec.kind) {
      case MethodKind::kBlackened:
        patch = filters::blacken(patch);
        break;
      case MethodKind::kBlackenedEdged:
        patch = filters::blacken_edged(patch, spec.canny);
        break;
      case MethodKind::kBlurred:
        patch = filters::gaussian_blur(patch, *fixed_h, *fixed_v);
        break;
      case MethodKind::kPixelized:
        patch = filters::pixelize(patch, spec.pixelize.d, spec.pixelize.d);
        break;
      case MethodKind::kBlurredAdaptive:
        patch = adaptive::adaptive_blur(patch, spec.blur, *r, spec.adaptive);
        break;
      case MethodKind::kPixelizedAdaptive:
        patch = adaptive::adaptive_pixelize(patch, spec.pixelize, *r, spec.adaptive);
        break;
      case MethodKind::kRaw:
        break;
    }
    if (measure_stages) {
      result.times.transform_us += micros_since(t0);
      t0 = Clock::now();
    }
    compose_masked_in_box(work, inst.mask, inst.box, patch);
    if (measure_stages) result.times.compose_us += micros_since(t0);

    if (r) result.r_values.push_back(*r);
    ++result.processed;
  }
  return result;
}

}  // namespace la3d
