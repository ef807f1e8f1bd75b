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

#include <string>

#include <json.hpp>

#include "pipeline.hpp"

namespace la3d::pipeline {

// Timing values live under "timing" keys so determinism checks can drop them.
nlohmann::json to_json(const ProxyMetrics& m);
nlohmann::json to_json(const FrameReport& r);
nlohmann::json to_json(const StageStats& s);
nlohmann::json to_json(const SequenceSummary& s);

// Columns: index,frame_id,quarantined,instances,detect_us,transform_us,
// compose_us,total_us,r_values,mask_pixels,mse_r,mse_g,mse_b,mse_mean,
// psnr_db,hf_ratio,outside_diff
std::string per_frame_csv(const SequenceSummary& s);

}  // namespace la3d::pipeline
