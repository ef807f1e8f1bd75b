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
#include <chrono>
#include <future>
#include <numeric>

#include "error.hpp"
#include "pipeline.hpp"

namespace la3d::pipeline {

using Clock = std::chrono::steady_clock;

FrameOutput process_frame(const Frame& frame, std::span<const InstanceMask> instances,
                          const AnonymizerSpec& spec, bool with_metrics) {
  AnonymizeResult r = anonymize_instances(frame, instances, spec, /*measure_stages=*/true);
  FrameReport report;
  report.transform_us = r.times.transform_us;
  report.compose_us = r.times.compose_us;
  report.instance_count = r.processed;
  report.r_values = std::move(r.r_values);
  if (with_metrics) report.metrics = proxy_metrics(frame, r.frame, instances);
  return FrameOutput{std::move(r.frame), std::move(report)};
}

double percentile(std::span<const double> sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

StageStats summarize(std::vector<double> samples) {
  StageStats s;
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
           static_cast<double>(samples.size());
  s.median = percentile(samples, 0.5);
  s.p95 = percentile(samples, 0.95);
  return s;
}

namespace {

struct Job {
  SourceFrame input;
  Frame output;
  FrameReport report;
};

Job run_one(SourceFrame input, std::size_t index, const Detector& detector,
            const AnonymizerSpec& spec, const SequenceOptions& options) {
  FrameReport report;
  report.frame_id = input.frame_id;
  report.index = index;

  std::vector<InstanceMask> instances;
  const auto t0 = Clock::now();
  try {
    instances = detector(input.frame, input.frame_id);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDetectorUnavailable ||
        options.on_detector_failure == FailurePolicy::kAbort) {
      throw;
    }
    report.detect_us = std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
    report.quarantined = true;
    report.error = e.what();
    Frame raw = input.frame;
    return Job{std::move(input), std::move(raw), std::move(report)};
  }
  report.detect_us = std::chrono::duration<double, std::micro>(Clock::now() - t0).count();

  FrameOutput out = process_frame(input.frame, instances, spec, options.compute_metrics);
  out.report.frame_id = report.frame_id;
  out.report.index = index;
  out.report.detect_us = report.detect_us;
  return Job{std::move(input), std::move(out.frame), std::move(out.report)};
}

}  // namespace

SequenceSummary process_sequence(const FrameSource& source, const Detector& detector,
                                 const AnonymizerSpec& spec, const FrameSink& sink,
                                 const SequenceOptions& options) {
  if (options.workers < 1) fail(ErrorCode::kInvalidArgument, "worker count must be >= 1");
  if (spec.kind != MethodKind::kRaw) validate_spec(spec);

  SequenceSummary summary;
  summary.preset = spec.preset_name;
  const auto wall0 = Clock::now();
  std::size_t index = 0;
  bool exhausted = false;
  while (!exhausted) {
    // Bounded window of in-flight frames, emitted in input order.
    std::vector<std::future<Job>> window;
    while (window.size() < static_cast<std::size_t>(options.workers)) {
      std::optional<SourceFrame> next = source();
      if (!next) {
        exhausted = true;
        break;
      }
      const std::size_t i = index++;
      if (options.workers == 1) {
        std::promise<Job> p;
        try {
          p.set_value(run_one(std::move(*next), i, detector, spec, options));
        } catch (...) {
          p.set_exception(std::current_exception());
        }
        window.push_back(p.get_future());
      } else {
        window.push_back(std::async(std::launch::async, run_one, std::move(*next), i,
                                    std::cref(detector), std::cref(spec), std::cref(options)));
      }
    }
    for (auto& f : window) {
      Job job = f.get();
      if (sink) sink(job.input, job.output, job.report);
      if (job.report.quarantined) ++summary.quarantined;
      summary.per_frame.push_back(std::move(job.report));
    }
  }
  summary.wall_seconds = std::chrono::duration<double>(Clock::now() - wall0).count();
  summary.frames = summary.per_frame.size();

  std::vector<double> det, tr, co, tot;
  for (const auto& r : summary.per_frame) {
    if (r.quarantined) continue;
    det.push_back(r.detect_us);
    tr.push_back(r.transform_us);
    co.push_back(r.compose_us);
    tot.push_back(r.total_us());
  }
  summary.detect = summarize(std::move(det));
  summary.transform = summarize(std::move(tr));
  summary.compose = summarize(std::move(co));
  summary.total = summarize(std::move(tot));
  summary.throughput_fps = summary.wall_seconds > 0.0 && summary.frames > 0
                               ? static_cast<double>(summary.frames) / summary.wall_seconds
                               : 0.0;
  return summary;
}

}  // namespace la3d::pipeline
