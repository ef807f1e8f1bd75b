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
#include <set>

#include "error.hpp"
#include "segmentation.hpp"

namespace la3d::seg {

void validate_config(const DetectorConfig& config) {
  if (!(config.confidence_threshold >= 0.0 && config.confidence_threshold <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "confidence threshold must lie in [0, 1]");
  }
  if (config.inference_size.width < 1 || config.inference_size.height < 1) {
    fail(ErrorCode::kInvalidArgument, "inference size must be at least 1x1");
  }
}

namespace {

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

}  // namespace

InferenceGeometry plan_inference(int width, int height, const DetectorConfig& config) {
  InferenceGeometry g;
  g.source = {width, height};
  g.inference = config.inference_size;
  g.padded = g.source;
  const int iw = config.inference_size.width;
  const int ih = config.inference_size.height;
  if (config.pad_small_inputs && (width < iw || height < ih)) {
    if (width <= iw && height <= ih) {
      g.padded = {iw, ih};
    } else {
      g.padded.width = static_cast<int>(std::max<long long>(width, ceil_div(1LL * height * iw, ih)));
      g.padded.height = static_cast<int>(std::max<long long>(height, ceil_div(1LL * width * ih, iw)));
    }
    g.pad_left = (g.padded.width - width) / 2;
    g.pad_top = (g.padded.height - height) / 2;
  }
  return g;
}

Frame pad_replicate(const Frame& frame, const InferenceGeometry& g) {
  if (!g.is_padded()) return frame;
  Frame out(g.padded.width, g.padded.height);
  const int w = frame.width();
  const int h = frame.height();
  for (int y = 0; y < g.padded.height; ++y) {
    const int sy = std::clamp(y - g.pad_top, 0, h - 1);
    const std::uint8_t* src = frame.row(sy).data();
    std::uint8_t* dst = out.row(y).data();
    for (int x = 0; x < g.padded.width; ++x) {
      const int sx = std::clamp(x - g.pad_left, 0, w - 1);
      dst[x * 3] = src[sx * 3];
      dst[x * 3 + 1] = src[sx * 3 + 1];
      dst[x * 3 + 2] = src[sx * 3 + 2];
    }
  }
  return out;
}

Frame unpad(const Frame& padded, const InferenceGeometry& g) {
  if (!g.is_padded()) return padded;
  return crop(padded, BBox{g.pad_left, g.pad_top, g.source.width, g.source.height});
}

Frame resize_bilinear(const Frame& frame, int width, int height) {
  if (frame.width() == width && frame.height() == height) return frame;
  Frame out(width, height);
  const double sx = static_cast<double>(frame.width()) / width;
  const double sy = static_cast<double>(frame.height()) / height;
  const int max_x = frame.width() - 1;
  const int max_y = frame.height() - 1;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(max_y));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, max_y);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(max_x));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, max_x);
      const double wx = fx - x0;
      const Rgb a = frame.at(x0, y0), b = frame.at(x1, y0);
      const Rgb c = frame.at(x0, y1), d = frame.at(x1, y1);
      auto mix = [&](double pa, double pb, double pc, double pd) {
        const double top = pa + (pb - pa) * wx;
        const double bot = pc + (pd - pc) * wx;
        return static_cast<std::uint8_t>(std::clamp(std::floor(top + (bot - top) * wy + 0.5), 0.0, 255.0));
      };
      out.set(x, y, Rgb{mix(a.r, b.r, c.r, d.r), mix(a.g, b.g, c.g, d.g),
                        mix(a.b, b.b, c.b, d.b)});
    }
  }
  return out;
}

BinaryMask resize_mask_nearest(const BinaryMask& mask, int width, int height) {
  if (mask.width() == width && mask.height() == height) return mask;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * height);
  std::vector<int> col(static_cast<std::size_t>(width));
  for (int x = 0; x < width; ++x) {
    col[static_cast<std::size_t>(x)] = static_cast<int>(1LL * x * mask.width() / width);
  }
  for (int y = 0; y < height; ++y) {
    const int sy = static_cast<int>(1LL * y * mask.height() / height);
    for (int x = 0; x < width; ++x) {
      bits[static_cast<std::size_t>(y) * width + x] = mask.at(col[static_cast<std::size_t>(x)], sy);
    }
  }
  return BinaryMask(width, height, std::move(bits));
}

Frame prepare_for_inference(const Frame& frame, const InferenceGeometry& g) {
  return resize_bilinear(pad_replicate(frame, g), g.inference.width, g.inference.height);
}

BinaryMask restore_mask(const BinaryMask& mask, const InferenceGeometry& g) {
  BinaryMask full = resize_mask_nearest(mask, g.padded.width, g.padded.height);
  if (!g.is_padded()) return full;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(g.source.width) * g.source.height);
  for (int y = 0; y < g.source.height; ++y) {
    for (int x = 0; x < g.source.width; ++x) {
      bits[static_cast<std::size_t>(y) * g.source.width + x] =
          full.at(x + g.pad_left, y + g.pad_top);
    }
  }
  return BinaryMask(g.source.width, g.source.height, std::move(bits));
}

BBox restore_box(const BBox& box, const InferenceGeometry& g) {
  const long long pw = g.padded.width, ph = g.padded.height;
  const long long iw = g.inference.width, ih = g.inference.height;
  long long x0 = box.x * pw / iw;
  long long y0 = box.y * ph / ih;
  long long x1 = ceil_div((box.x + box.w) * pw, iw);
  long long y1 = ceil_div((box.y + box.h) * ph, ih);
  x0 = std::clamp<long long>(x0 - g.pad_left, 0, g.source.width);
  x1 = std::clamp<long long>(x1 - g.pad_left, 0, g.source.width);
  y0 = std::clamp<long long>(y0 - g.pad_top, 0, g.source.height);
  y1 = std::clamp<long long>(y1 - g.pad_top, 0, g.source.height);
  return BBox{static_cast<int>(x0), static_cast<int>(y0), static_cast<int>(x1 - x0),
              static_cast<int>(y1 - y0)};
}

std::vector<InstanceMask> detect(const Frame& frame, const std::string& frame_id,
                                 const DetectorConfig& config, MaskProvider& provider) {
  validate_config(config);
  const InferenceGeometry geometry = plan_inference(frame.width(), frame.height(), config);

  ProviderResult result;
  try {
    result = provider.consumes_pixels()
                 ? provider.segment(prepare_for_inference(frame, geometry), frame_id)
                 : provider.segment(frame, frame_id);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDetectorUnavailable) throw;
    fail(ErrorCode::kDetectorUnavailable, "mask provider failed for frame '" + frame_id +
                                              "': " + error_code_name(e.code()) + ": " +
                                              e.what());
  }

  const bool native = result.width == frame.width() && result.height == frame.height();
  const bool inference = result.width == geometry.inference.width &&
                         result.height == geometry.inference.height;
  if (!native && !inference) {
    fail(ErrorCode::kDetectorUnavailable,
         "mask provider returned " + std::to_string(result.width) + "x" +
             std::to_string(result.height) + " masks for frame '" + frame_id + "', expected " +
             std::to_string(frame.width()) + "x" + std::to_string(frame.height()) + " or " +
             std::to_string(geometry.inference.width) + "x" +
             std::to_string(geometry.inference.height));
  }

  std::set<int> classes(config.person_class_ids.begin(), config.person_class_ids.end());
  if (config.include_personal_items) {
    classes.insert(config.item_class_ids.begin(), config.item_class_ids.end());
  }

  std::vector<InstanceMask> out;
  for (InstanceMask& inst : result.instances) {
    if (inst.score < config.confidence_threshold) continue;
    if (!classes.count(inst.class_id)) continue;
    if (native) {
      out.push_back(std::move(inst));
      continue;
    }
    BinaryMask restored = restore_mask(inst.mask, geometry);
    const auto box = tight_bbox(restored);
    if (!box) continue;
    out.push_back(InstanceMask{std::move(restored), *box, inst.class_id, inst.score});
  }
  return out;
}

}  // namespace la3d::seg
