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

#include "report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace la3d::pipeline {

using nlohmann::json;

namespace {

// JSON has no infinity; unbounded values are written as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string num(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : "nan";
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

json to_json(const ProxyMetrics& m) {
  return {{"mask_pixels", m.mask_pixels},
          {"mse", {m.mse[0], m.mse[1], m.mse[2]}},
          {"mse_mean", m.mse_mean},
          {"psnr_db", finite_or_null(m.psnr_db)},
          {"hf_ratio", finite_or_null(m.hf_ratio)},
          {"outside_diff", m.outside_diff}};
}

json to_json(const FrameReport& r) {
  json j = {{"index", r.index},
            {"frame_id", r.frame_id},
            {"quarantined", r.quarantined},
            {"instances", r.instance_count},
            {"r_values", r.r_values},
            {"timing",
             {{"detect_us", r.detect_us},
              {"transform_us", r.transform_us},
              {"compose_us", r.compose_us},
              {"total_us", r.total_us()}}}};
  if (r.metrics) j["proxy_metrics"] = to_json(*r.metrics);
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

json to_json(const StageStats& s) {
  return {{"mean_us", s.mean}, {"median_us", s.median}, {"p95_us", s.p95}};
}

json to_json(const SequenceSummary& s) {
  json frames = json::array();
  for (const auto& r : s.per_frame) frames.push_back(to_json(r));
  return {{"preset", s.preset},
          {"frames", s.frames},
          {"quarantined", s.quarantined},
          {"proxy_metrics_note", kProxyMetricsNote},
          {"timing",
           {{"detect", to_json(s.detect)},
            {"transform", to_json(s.transform)},
            {"compose", to_json(s.compose)},
            {"total", to_json(s.total)},
            {"wall_seconds", s.wall_seconds},
            {"throughput_fps", s.throughput_fps}}},
          {"per_frame", frames}};
}

std::string per_frame_csv(const SequenceSummary& s) {
  std::ostringstream os;
  os << "index,frame_id,quarantined,instances,detect_us,transform_us,compose_us,total_us,"
        "r_values,mask_pixels,mse_r,mse_g,mse_b,mse_mean,psnr_db,hf_ratio,outside_diff\n";
  for (const auto& r : s.per_frame) {
    os << r.index << ',' << r.frame_id << ',' << (r.quarantined ? 1 : 0) << ','
       << r.instance_count << ',' << num(r.detect_us) << ',' << num(r.transform_us) << ','
       << num(r.compose_us) << ',' << num(r.total_us()) << ',';
    for (std::size_t i = 0; i < r.r_values.size(); ++i) os << (i ? ";" : "") << num(r.r_values[i]);
    os << ',';
    if (r.metrics) {
      const auto& m = *r.metrics;
      os << m.mask_pixels << ',' << num(m.mse[0]) << ',' << num(m.mse[1]) << ','
         << num(m.mse[2]) << ',' << num(m.mse_mean) << ',' << num(m.psnr_db) << ','
         << num(m.hf_ratio) << ',' << m.outside_diff;
    } else {
      os << ",,,,,,,";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace la3d::pipeline
