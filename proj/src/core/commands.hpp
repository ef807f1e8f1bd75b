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

// Run-level operations behind the command-line tool. Each takes a fully
// parsed RunConfig and returns a JSON result document; failures throw
// la3d::Error whose code doubles as the process exit status.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "adaptive.hpp"
#include "pipeline.hpp"
#include "segmentation.hpp"

namespace la3d::cli {

struct RunConfig {
  std::filesystem::path input;
  std::optional<std::filesystem::path> masks;
  std::optional<std::string> provider_cmd;
  int provider_timeout_ms = 30000;
  std::filesystem::path output;
  std::string preset;
  std::vector<std::string> presets;

  std::optional<double> alpha_r;
  std::optional<double> alpha_b;
  std::optional<bool> ismax;
  std::optional<bool> isfullblur;
  std::optional<Resolution> z_ref;

  std::optional<double> lambda;
  std::optional<bool> include_items;
  bool pad_small_inputs = false;

  pipeline::FailurePolicy on_detector_failure = pipeline::FailurePolicy::kAbort;
  int workers = 1;
  int repeats = 3;
  std::optional<std::filesystem::path> report_dir;
  nlohmann::json user_presets = nlohmann::json::array();
};

// Strict: unknown keys and wrongly typed values raise kInvalidArgument naming
// the key.
RunConfig parse_run_config(const nlohmann::json& doc);

// "WxH" -> Resolution; throws kInvalidArgument.
Resolution parse_resolution(const std::string& text);

// Built-in presets plus any user presets of the config.
pipeline::PresetRegistry build_registry(const RunConfig& config);

// Resolves a preset and applies the config's adaptive overrides.
AnonymizerSpec resolve_spec(const RunConfig& config, const pipeline::PresetRegistry& registry,
                            const std::string& name);

seg::DetectorConfig detector_config(const RunConfig& config);

// *.png files of `dir` in lexicographic order.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

nlohmann::json cmd_anonymize(const RunConfig& config);
nlohmann::json cmd_bench(const RunConfig& config);
nlohmann::json cmd_compare(const RunConfig& config);
nlohmann::json cmd_validate_masks(const std::filesystem::path& mask_dir);

}  // namespace la3d::cli
