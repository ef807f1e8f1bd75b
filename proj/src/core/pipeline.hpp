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

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaptive.hpp"
#include "image.hpp"

namespace la3d::pipeline {

// ---------------------------------------------------------------------------
// Presets

// The built-in method table, in display order.
const std::vector<std::string>& builtin_preset_names();

// Built-in presets only. Throws kUnknownPreset listing the available names.
AnonymizerSpec resolve_preset(std::string_view name);

class PresetRegistry {
 public:
  PresetRegistry();

  // Throws kInvalidArgument when the name is taken or the spec is invalid.
  void add(AnonymizerSpec spec);
  AnonymizerSpec resolve(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, AnonymizerSpec, std::less<>> specs_;
};

// ---------------------------------------------------------------------------
// Proxy metrics. Pixel statistics only; they do not stand in for any
// recognition-model evaluation.

inline constexpr const char* kProxyMetricsNote =
    "proxy metrics are model-free pixel statistics inside the person masks; they are not "
    "equivalent to privacy-attribute cMAP, re-identification mAP/CMC or anomaly-detection AUC";

struct ProxyMetrics {
  std::size_t mask_pixels = 0;
  std::array<double, 3> mse{0.0, 0.0, 0.0};
  double mse_mean = 0.0;
  // +inf when the masked region is unchanged.
  double psnr_db = 0.0;
  // Laplacian energy of the anonymized frame over that of the original.
  double hf_ratio = 1.0;
  std::size_t outside_diff = 0;
};

ProxyMetrics proxy_metrics(const Frame& original, const Frame& anonymized,
                           std::span<const InstanceMask> instances);

// Sum of squared 3x3 Laplacian responses (all channels, replicated border)
// over the set bits of `mask`.
double laplacian_energy(const Frame& frame, const BinaryMask& mask);

// ---------------------------------------------------------------------------
// Per-frame processing

struct FrameReport {
  std::string frame_id;
  std::size_t index = 0;
  double detect_us = 0.0;
  double transform_us = 0.0;
  double compose_us = 0.0;
  std::size_t instance_count = 0;
  std::vector<double> r_values;
  std::optional<ProxyMetrics> metrics;
  bool quarantined = false;
  std::string error;

  double total_us() const noexcept { return detect_us + transform_us + compose_us; }
};

struct FrameOutput {
  Frame frame;
  FrameReport report;
};

FrameOutput process_frame(const Frame& frame, std::span<const InstanceMask> instances,
                          const AnonymizerSpec& spec, bool with_metrics = true);

// ---------------------------------------------------------------------------
// Sequences

struct SourceFrame {
  std::string frame_id;
  Frame frame;
};

// Yields frames in temporal order; nullopt at the end.
using FrameSource = std::function<std::optional<SourceFrame>()>;

using Detector =
    std::function<std::vector<InstanceMask>(const Frame& frame, const std::string& frame_id)>;

// Receives frames in input order. `output` is the raw input for quarantined
// frames.
using FrameSink =
    std::function<void(const SourceFrame& input, const Frame& output, const FrameReport& report)>;

enum class FailurePolicy { kAbort, kQuarantine };

struct SequenceOptions {
  int workers = 1;
  FailurePolicy on_detector_failure = FailurePolicy::kAbort;
  bool compute_metrics = true;
};

struct StageStats {
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
};

// Linear interpolation between closest ranks; `sorted` must be ascending.
double percentile(std::span<const double> sorted, double p);
StageStats summarize(std::vector<double> samples);

struct SequenceSummary {
  std::string preset;
  std::size_t frames = 0;
  std::size_t quarantined = 0;
  StageStats detect;
  StageStats transform;
  StageStats compose;
  StageStats total;
  double wall_seconds = 0.0;
  double throughput_fps = 0.0;
  std::vector<FrameReport> per_frame;
};

SequenceSummary process_sequence(const FrameSource& source, const Detector& detector,
                                 const AnonymizerSpec& spec, const FrameSink& sink,
                                 const SequenceOptions& options = {});

}  // namespace la3d::pipeline
