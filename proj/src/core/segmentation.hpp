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

// Person-mask acquisition. Providers return instance masks either at the
// frame's native resolution or at the inference resolution; detect() maps
// them back onto the original frame.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adaptive.hpp"
#include "image.hpp"
#include "png_io.hpp"

namespace la3d::seg {

// COCO category ids as indexed by YOLO models.
inline constexpr int kPersonClassId = 0;
// backpack, umbrella, handbag, suitcase, laptop, cell phone
inline const std::vector<int> kPersonalItemClassIds = {24, 25, 26, 28, 63, 67};

struct DetectorConfig {
  double confidence_threshold = 0.25;
  Resolution inference_size{320, 240};
  bool pad_small_inputs = false;
  std::vector<int> person_class_ids{kPersonClassId};
  bool include_personal_items = false;
  std::vector<int> item_class_ids = kPersonalItemClassIds;
};

void validate_config(const DetectorConfig& config);

// ---------------------------------------------------------------------------
// Sidecar files: <frame_id>.json metadata plus <frame_id>.mask.png label
// raster where pixel value v > 0 belongs to instance v.

inline constexpr int kMaxInstanceId = 255;

std::filesystem::path sidecar_json_path(const std::filesystem::path& dir,
                                        const std::string& frame_id);
std::filesystem::path sidecar_mask_path(const std::filesystem::path& dir,
                                        const std::string& frame_id);

struct ProviderResult {
  int width = 0;
  int height = 0;
  // Ascending instance id.
  std::vector<InstanceMask> instances;
};

struct Violation {
  std::string file;
  std::string field;
  std::string message;
  std::optional<int> instance_id;
  std::optional<std::size_t> byte_offset;
};

std::string describe(const Violation& v);

// Writes instances with ids 1..n in the given order. Overlapping masks cannot
// be represented in a label raster and are rejected with kInvalidArgument;
// more than 255 instances raise kFormat.
void write_sidecar(const std::filesystem::path& dir, const std::string& frame_id, int width,
                   int height, std::span<const InstanceMask> instances);

// Collects every contract violation for one frame's sidecar pair.
std::vector<Violation> validate_sidecar(const std::filesystem::path& dir,
                                        const std::string& frame_id);

// Frame ids of every *.json sidecar in `dir`, sorted.
std::vector<std::string> list_sidecars(const std::filesystem::path& dir);

// Throws kNotFound when the metadata or raster is missing and kFormat naming
// the first offending field otherwise.
ProviderResult read_sidecar(const std::filesystem::path& dir, const std::string& frame_id);

inline std::vector<InstanceMask> load_sidecar(const std::filesystem::path& dir,
                                              const std::string& frame_id) {
  return read_sidecar(dir, frame_id).instances;
}

// ---------------------------------------------------------------------------
// Providers.

class MaskProvider {
 public:
  virtual ~MaskProvider() = default;

  // False when the provider ignores pixel data, so the frame need not be
  // prepared for inference.
  virtual bool consumes_pixels() const = 0;

  virtual ProviderResult segment(const Frame& frame, const std::string& frame_id) = 0;
};

class SidecarProvider final : public MaskProvider {
 public:
  explicit SidecarProvider(std::filesystem::path dir) : dir_(std::move(dir)) {}

  bool consumes_pixels() const override { return false; }
  ProviderResult segment(const Frame& frame, const std::string& frame_id) override;

 private:
  std::filesystem::path dir_;
};

struct BatchItem {
  const Frame* frame;
  std::string frame_id;
};

// Runs `command` through /bin/sh with two extra arguments: a manifest JSON
// path and an output directory that must receive one sidecar pair per frame.
// Calls into one instance are serialized.
class ExternalProvider final : public MaskProvider {
 public:
  ExternalProvider(std::string command, std::chrono::milliseconds per_frame_timeout);

  bool consumes_pixels() const override { return true; }
  ProviderResult segment(const Frame& frame, const std::string& frame_id) override;
  std::vector<ProviderResult> segment_batch(std::span<const BatchItem> batch);

 private:
  std::string command_;
  std::chrono::milliseconds timeout_;
  std::mutex mutex_;
};

std::unique_ptr<MaskProvider> external_provider(
    std::string command,
    std::chrono::milliseconds per_frame_timeout = std::chrono::milliseconds(30000));

// ---------------------------------------------------------------------------
// Inference geometry.

struct InferenceGeometry {
  Resolution source;
  Resolution padded;
  int pad_left = 0;
  int pad_top = 0;
  Resolution inference;

  bool is_padded() const noexcept { return padded != source; }
};

// Small frames are padded when requested: to exactly the inference size when
// they fit inside it, otherwise to its aspect ratio. Padding is centred.
InferenceGeometry plan_inference(int width, int height, const DetectorConfig& config);

Frame pad_replicate(const Frame& frame, const InferenceGeometry& geometry);
Frame unpad(const Frame& padded, const InferenceGeometry& geometry);
Frame resize_bilinear(const Frame& frame, int width, int height);
BinaryMask resize_mask_nearest(const BinaryMask& mask, int width, int height);

// The padded, resized frame handed to pixel-consuming providers.
Frame prepare_for_inference(const Frame& frame, const InferenceGeometry& geometry);

// Maps a mask at inference resolution back onto the source frame.
BinaryMask restore_mask(const BinaryMask& mask, const InferenceGeometry& geometry);

// Conservative rescale of an inference-space box onto the source frame: the
// result always contains the restored mask of any mask inside `box`.
BBox restore_box(const BBox& box, const InferenceGeometry& geometry);

// Provider failures of any kind surface as kDetectorUnavailable; an empty
// result is a valid "no detections" answer.
std::vector<InstanceMask> detect(const Frame& frame, const std::string& frame_id,
                                 const DetectorConfig& config, MaskProvider& provider);

}  // namespace la3d::seg
