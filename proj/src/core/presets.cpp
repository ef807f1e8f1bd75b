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

#include <sstream>

#include "error.hpp"
#include "pipeline.hpp"

namespace la3d::pipeline {
namespace {

AnonymizerSpec make(std::string name, MethodKind kind) {
  AnonymizerSpec s;
  s.preset_name = std::move(name);
  s.kind = kind;
  return s;
}

AnonymizerSpec pixelized(std::string name, int d, bool adaptive) {
  AnonymizerSpec s =
      make(std::move(name), adaptive ? MethodKind::kPixelizedAdaptive : MethodKind::kPixelized);
  s.pixelize.d = d;
  return s;
}

std::vector<AnonymizerSpec> builtin_specs() {
  std::vector<AnonymizerSpec> v;
  v.push_back(make("RAW_IMAGE", MethodKind::kRaw));
  v.push_back(make("BLACKENED", MethodKind::kBlackened));
  AnonymizerSpec edged = make("BLACKENED_EDGED", MethodKind::kBlackenedEdged);
  edged.canny = {100.0, 200.0};
  v.push_back(edged);
  AnonymizerSpec blur = make("BLURRED", MethodKind::kBlurred);
  blur.blur = {13, 13, 10.0};
  v.push_back(blur);
  v.push_back(pixelized("PIXELIZED_D2", 2, false));
  v.push_back(pixelized("PIXELIZED_D4", 4, false));
  v.push_back(pixelized("PIXELIZED_D8", 8, false));

  AnonymizerSpec blur_a = blur;
  blur_a.preset_name = "BLURRED_A";
  blur_a.kind = MethodKind::kBlurredAdaptive;
  blur_a.adaptive = {1.0, 0.5, false, false, std::nullopt};
  v.push_back(blur_a);
  for (int d : {2, 4, 8}) {
    AnonymizerSpec p = pixelized("PIXELIZED_D" + std::to_string(d) + "_A", d, true);
    p.adaptive = {1.0, 0.5, false, false, std::nullopt};
    v.push_back(p);
  }
  AnonymizerSpec blur_max = blur_a;
  blur_max.preset_name = "BLURRED_A_MAX";
  blur_max.adaptive.ismax = true;
  v.push_back(blur_max);
  // The downsizing factor is irrelevant once ismax pins it to the box size.
  AnonymizerSpec pix_max = pixelized("PIXELIZED_A_MAX", 4, true);
  pix_max.adaptive = {1.0, 0.5, true, false, std::nullopt};
  v.push_back(pix_max);
  return v;
}

const std::vector<AnonymizerSpec>& builtins() {
  static const std::vector<AnonymizerSpec> specs = builtin_specs();
  return specs;
}

std::string join(const std::vector<std::string>& names) {
  std::ostringstream os;
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? ", " : "") << names[i];
  return os.str();
}

}  // namespace

const std::vector<std::string>& builtin_preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& s : builtins()) n.push_back(s.preset_name);
    return n;
  }();
  return names;
}

AnonymizerSpec resolve_preset(std::string_view name) {
  for (const auto& s : builtins()) {
    if (s.preset_name == name) return s;
  }
  fail(ErrorCode::kUnknownPreset, "unknown preset '" + std::string(name) +
                                      "'; available presets: " + join(builtin_preset_names()));
}

PresetRegistry::PresetRegistry() {
  for (const auto& s : builtins()) {
    order_.push_back(s.preset_name);
    specs_.emplace(s.preset_name, s);
  }
}

void PresetRegistry::add(AnonymizerSpec spec) {
  if (spec.preset_name.empty()) fail(ErrorCode::kInvalidArgument, "preset name is empty");
  if (specs_.count(spec.preset_name)) {
    fail(ErrorCode::kInvalidArgument, "preset '" + spec.preset_name + "' is already defined");
  }
  validate_spec(spec);
  order_.push_back(spec.preset_name);
  specs_.emplace(spec.preset_name, std::move(spec));
}

AnonymizerSpec PresetRegistry::resolve(std::string_view name) const {
  const auto it = specs_.find(name);
  if (it == specs_.end()) {
    fail(ErrorCode::kUnknownPreset,
         "unknown preset '" + std::string(name) + "'; available presets: " + join(order_));
  }
  return it->second;
}

std::vector<std::string> PresetRegistry::names() const { return order_; }

}  // namespace la3d::pipeline
