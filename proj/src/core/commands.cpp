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

#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "error.hpp"
#include "grid.hpp"
#include "log.hpp"
#include "png_io.hpp"
#include "report.hpp"

namespace la3d::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
  fail(ErrorCode::kInvalidArgument, "config key '" + key + "': " + what);
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) bad_key(key, "expected a string");
  return v.get<std::string>();
}

double as_number(const std::string& key, const json& v) {
  if (!v.is_number()) bad_key(key, "expected a number");
  return v.get<double>();
}

int as_int(const std::string& key, const json& v) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) bad_key(key, "expected an integer");
  return v.get<int>();
}

bool as_bool(const std::string& key, const json& v) {
  if (!v.is_boolean()) bad_key(key, "expected true or false");
  return v.get<bool>();
}

Resolution as_resolution(const std::string& key, const json& v) {
  if (v.is_string()) return parse_resolution(v.get<std::string>());
  if (v.is_array() && v.size() == 2) {
    Resolution r{as_int(key, v[0]), as_int(key, v[1])};
    if (r.width < 1 || r.height < 1) bad_key(key, "dimensions must be >= 1");
    return r;
  }
  bad_key(key, "expected \"WxH\" or [W, H]");
}

json spec_to_json(const AnonymizerSpec& s) {
  json j = {{"preset", s.preset_name}, {"kind", method_kind_name(s.kind)}};
  switch (s.kind) {
    case MethodKind::kBlurred:
    case MethodKind::kBlurredAdaptive:
      j["kernel"] = {s.blur.k_h, s.blur.k_w};
      j["sigma"] = s.blur.sigma;
      break;
    case MethodKind::kPixelized:
    case MethodKind::kPixelizedAdaptive:
      j["d"] = s.pixelize.d;
      break;
    case MethodKind::kBlackenedEdged:
      j["canny"] = {s.canny.low_threshold, s.canny.high_threshold};
      break;
    default:
      break;
  }
  if (s.is_adaptive()) {
    j["alpha_r"] = s.adaptive.alpha_r;
    j["alpha_b"] = s.adaptive.alpha_b;
    j["ismax"] = s.adaptive.ismax;
    j["isfullblur"] = s.adaptive.isfullblur;
    if (s.adaptive.z_ref) j["z_ref"] = {s.adaptive.z_ref->width, s.adaptive.z_ref->height};
  }
  return j;
}

AnonymizerSpec user_preset(const json& def, const pipeline::PresetRegistry& registry) {
  if (!def.is_object()) bad_key("user_presets", "each preset must be an object");
  if (!def.contains("name")) bad_key("user_presets", "preset without a name");
  const std::string name = as_string("user_presets.name", def["name"]);
  AnonymizerSpec s;
  if (def.contains("base")) s = registry.resolve(as_string("user_presets.base", def["base"]));
  s.preset_name = name;
  const std::string p = "user_presets[" + name + "].";
  for (const auto& [key, v] : def.items()) {
    if (key == "name" || key == "base") continue;
    if (key == "kind") {
      const auto k = parse_method_kind(as_string(p + key, v));
      if (!k) bad_key(p + key, "unknown kind");
      s.kind = *k;
    } else if (key == "kernel") {
      if (v.is_array() && v.size() == 2) {
        s.blur.k_h = as_int(p + key, v[0]);
        s.blur.k_w = as_int(p + key, v[1]);
      } else {
        s.blur.k_h = s.blur.k_w = as_int(p + key, v);
      }
    } else if (key == "sigma") {
      s.blur.sigma = as_number(p + key, v);
    } else if (key == "d") {
      s.pixelize.d = as_int(p + key, v);
    } else if (key == "canny") {
      if (!v.is_array() || v.size() != 2) bad_key(p + key, "expected [low, high]");
      s.canny = {as_number(p + key, v[0]), as_number(p + key, v[1])};
    } else if (key == "alpha_r") {
      s.adaptive.alpha_r = as_number(p + key, v);
    } else if (key == "alpha_b") {
      s.adaptive.alpha_b = as_number(p + key, v);
    } else if (key == "ismax") {
      s.adaptive.ismax = as_bool(p + key, v);
    } else if (key == "isfullblur") {
      s.adaptive.isfullblur = as_bool(p + key, v);
    } else if (key == "z_ref") {
      s.adaptive.z_ref = as_resolution(p + key, v);
    } else {
      bad_key(p + key, "unknown key");
    }
  }
  return s;
}

void require_input_dir(const fs::path& dir, const char* what) {
  std::error_code ec;
  if (dir.empty() || !fs::is_directory(dir, ec)) {
    fail(ErrorCode::kInputUnreadable, std::string(what) + " '" + dir.string() +
                                          "' is not a readable directory");
  }
}

void prepare_output_dir(const fs::path& dir) {
  if (dir.empty()) fail(ErrorCode::kInvalidArgument, "an output directory is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    fail(ErrorCode::kOutputUnwritable, "cannot create output directory '" + dir.string() + "'");
  }
  const fs::path probe = dir / ".la3d-write-probe";
  {
    std::ofstream out(probe);
    if (!out) fail(ErrorCode::kOutputUnwritable, "output directory '" + dir.string() +
                                                     "' is not writable");
  }
  fs::remove(probe, ec);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kOutputUnwritable, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(ErrorCode::kOutputUnwritable, "failed writing '" + path.string() + "'");
}

std::unique_ptr<seg::MaskProvider> make_provider(const RunConfig& c) {
  if (c.masks && c.provider_cmd) {
    fail(ErrorCode::kInvalidArgument, "choose either a mask directory or a provider command");
  }
  if (c.masks) {
    require_input_dir(*c.masks, "mask directory");
    return std::make_unique<seg::SidecarProvider>(*c.masks);
  }
  if (c.provider_cmd) {
    return seg::external_provider(*c.provider_cmd,
                                  std::chrono::milliseconds(c.provider_timeout_ms));
  }
  fail(ErrorCode::kInvalidArgument, "a mask source is required (--masks or --provider-cmd)");
}

std::vector<std::string> requested_presets(const RunConfig& c) {
  if (!c.presets.empty()) return c.presets;
  if (!c.preset.empty()) return {c.preset};
  return {};
}

std::string csv_num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

bool is_counterpart(const AnonymizerSpec& adaptive, const AnonymizerSpec& fixed) {
  if (adaptive.kind == MethodKind::kBlurredAdaptive && fixed.kind == MethodKind::kBlurred) {
    return adaptive.blur.k_h == fixed.blur.k_h && adaptive.blur.k_w == fixed.blur.k_w &&
           adaptive.blur.sigma == fixed.blur.sigma;
  }
  if (adaptive.kind == MethodKind::kPixelizedAdaptive && fixed.kind == MethodKind::kPixelized) {
    return adaptive.pixelize.d == fixed.pixelize.d;
  }
  return false;
}

double pct(double value, double base) { return base > 0.0 ? (value - base) / base * 100.0 : 0.0; }

}  // namespace

Resolution parse_resolution(const std::string& text) {
  const auto x = text.find_first_of("xX");
  auto digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](unsigned char c) { return std::isdigit(c) != 0; });
  };
  if (x == std::string::npos || !digits(text.substr(0, x)) || !digits(text.substr(x + 1)) ||
      text.size() > 15) {
    fail(ErrorCode::kInvalidArgument, "expected a resolution like 320x240, got '" + text + "'");
  }
  Resolution r{std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  if (r.width < 1 || r.height < 1) {
    fail(ErrorCode::kInvalidArgument, "resolution must be at least 1x1, got '" + text + "'");
  }
  return r;
}

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) fail(ErrorCode::kInvalidArgument, "config must be a JSON object");
  RunConfig c;
  for (const auto& [key, v] : doc.items()) {
    if (v.is_null()) continue;
    if (key == "input") {
      c.input = as_string(key, v);
    } else if (key == "masks") {
      c.masks = fs::path(as_string(key, v));
    } else if (key == "provider_cmd") {
      c.provider_cmd = as_string(key, v);
    } else if (key == "provider_timeout_ms") {
      c.provider_timeout_ms = as_int(key, v);
      if (c.provider_timeout_ms < 1) bad_key(key, "must be >= 1");
    } else if (key == "output") {
      c.output = as_string(key, v);
    } else if (key == "preset") {
      c.preset = as_string(key, v);
    } else if (key == "presets") {
      if (!v.is_array()) bad_key(key, "expected an array of preset names");
      for (const auto& p : v) c.presets.push_back(as_string(key, p));
    } else if (key == "alpha_r") {
      c.alpha_r = as_number(key, v);
      if (!(*c.alpha_r > 0.0)) bad_key(key, "must be > 0");
    } else if (key == "alpha_b") {
      c.alpha_b = as_number(key, v);
      if (!(*c.alpha_b > 0.0 && *c.alpha_b <= 1.0)) bad_key(key, "must lie in (0, 1]");
    } else if (key == "ismax") {
      c.ismax = as_bool(key, v);
    } else if (key == "isfullblur") {
      c.isfullblur = as_bool(key, v);
    } else if (key == "z_ref") {
      c.z_ref = as_resolution(key, v);
    } else if (key == "lambda") {
      c.lambda = as_number(key, v);
      if (!(*c.lambda >= 0.0 && *c.lambda <= 1.0)) bad_key(key, "must lie in [0, 1]");
    } else if (key == "include_items") {
      c.include_items = as_bool(key, v);
    } else if (key == "pad_small_inputs") {
      c.pad_small_inputs = as_bool(key, v);
    } else if (key == "on_detector_failure") {
      const std::string p = as_string(key, v);
      if (p == "abort") {
        c.on_detector_failure = pipeline::FailurePolicy::kAbort;
      } else if (p == "quarantine") {
        c.on_detector_failure = pipeline::FailurePolicy::kQuarantine;
      } else {
        bad_key(key, "expected 'abort' or 'quarantine'");
      }
    } else if (key == "workers") {
      c.workers = as_int(key, v);
      if (c.workers < 1 || c.workers > 256) bad_key(key, "must lie in [1, 256]");
    } else if (key == "repeats") {
      c.repeats = as_int(key, v);
      if (c.repeats < 1) bad_key(key, "must be >= 1");
    } else if (key == "report_dir") {
      c.report_dir = fs::path(as_string(key, v));
    } else if (key == "user_presets") {
      if (!v.is_array()) bad_key(key, "expected an array of preset objects");
      c.user_presets = v;
    } else {
      bad_key(key, "unknown key");
    }
  }
  return c;
}

pipeline::PresetRegistry build_registry(const RunConfig& config) {
  pipeline::PresetRegistry registry;
  for (const auto& def : config.user_presets) registry.add(user_preset(def, registry));
  return registry;
}

AnonymizerSpec resolve_spec(const RunConfig& c, const pipeline::PresetRegistry& registry,
                            const std::string& name) {
  AnonymizerSpec s = registry.resolve(name);
  const bool overridden = c.alpha_r || c.alpha_b || c.ismax || c.isfullblur || c.z_ref;
  if (overridden && !s.is_adaptive()) {
    log::warn("adaptive overrides have no effect on non-adaptive preset " + name);
  }
  if (c.alpha_r) s.adaptive.alpha_r = *c.alpha_r;
  if (c.alpha_b) s.adaptive.alpha_b = *c.alpha_b;
  if (c.ismax) s.adaptive.ismax = *c.ismax;
  if (c.isfullblur) s.adaptive.isfullblur = *c.isfullblur;
  if (c.z_ref) s.adaptive.z_ref = c.z_ref;
  validate_spec(s);
  return s;
}

seg::DetectorConfig detector_config(const RunConfig& c) {
  seg::DetectorConfig d;
  if (c.lambda) d.confidence_threshold = *c.lambda;
  if (c.include_items) d.include_personal_items = *c.include_items;
  d.pad_small_inputs = c.pad_small_inputs;
  seg::validate_config(d);
  return d;
}

std::vector<fs::path> list_frames(const fs::path& dir) {
  require_input_dir(dir, "input");
  std::vector<fs::path> frames;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".png") frames.push_back(entry.path());
  }
  if (ec) fail(ErrorCode::kInputUnreadable, dir.string() + ": " + ec.message());
  std::sort(frames.begin(), frames.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return frames;
}

json cmd_anonymize(const RunConfig& c) {
  const auto registry = build_registry(c);
  if (c.preset.empty()) fail(ErrorCode::kInvalidArgument, "a preset is required (--preset)");
  const AnonymizerSpec spec = resolve_spec(c, registry, c.preset);
  const seg::DetectorConfig det = detector_config(c);
  const auto frames = list_frames(c.input);
  auto provider = make_provider(c);
  prepare_output_dir(c.output);
  const fs::path report_dir = c.report_dir.value_or(c.output);
  prepare_output_dir(report_dir);

  std::size_t cursor = 0;
  pipeline::FrameSource source = [&]() -> std::optional<pipeline::SourceFrame> {
    if (cursor == frames.size()) return std::nullopt;
    const fs::path& p = frames[cursor++];
    log::debug("reading " + p.string());
    return pipeline::SourceFrame{p.stem().string(), io::read_png(p)};
  };
  pipeline::Detector detector = [&](const Frame& f, const std::string& id) {
    return seg::detect(f, id, det, *provider);
  };
  bool quarantine_ready = false;
  pipeline::FrameSink sink = [&](const pipeline::SourceFrame&, const Frame& out,
                                 const pipeline::FrameReport& report) {
    const fs::path name = frames[report.index].filename();
    if (report.quarantined) {
      const fs::path qdir = c.output / "quarantine";
      if (!quarantine_ready) {
        prepare_output_dir(qdir);
        quarantine_ready = true;
      }
      log::warn("quarantined " + name.string() + ": " + report.error);
      io::write_png(qdir / name, out);
      return;
    }
    io::write_png(c.output / name, out);
  };

  pipeline::SequenceOptions options;
  options.workers = c.workers;
  options.on_detector_failure = c.on_detector_failure;
  const pipeline::SequenceSummary summary =
      pipeline::process_sequence(source, detector, spec, sink, options);

  json doc = pipeline::to_json(summary);
  doc["spec"] = spec_to_json(spec);
  write_text(report_dir / "summary.json", doc.dump(2) + "\n");
  write_text(report_dir / "per-frame.csv", pipeline::per_frame_csv(summary));
  log::info("anonymized " + std::to_string(summary.frames) + " frames with " + spec.preset_name);
  return doc;
}

json cmd_bench(const RunConfig& c) {
  const auto registry = build_registry(c);
  const auto names = requested_presets(c);
  if (names.empty()) fail(ErrorCode::kInvalidArgument, "bench needs at least one preset");
  if (c.repeats < 3) fail(ErrorCode::kInvalidArgument, "bench needs --repeats >= 3");

  struct Entry {
    AnonymizerSpec spec;
    bool baseline_only = false;
    std::vector<pipeline::FrameReport> samples;
  };
  std::vector<Entry> entries;
  for (const auto& n : names) entries.push_back({resolve_spec(c, registry, n), false, {}});
  const bool has_raw = std::any_of(entries.begin(), entries.end(), [](const Entry& e) {
    return e.spec.kind == MethodKind::kRaw;
  });
  if (!has_raw) entries.insert(entries.begin(), Entry{pipeline::resolve_preset("RAW_IMAGE"), true, {}});

  const seg::DetectorConfig det = detector_config(c);
  const auto paths = list_frames(c.input);
  auto provider = make_provider(c);
  const fs::path report_dir = c.report_dir.value_or(c.output);
  prepare_output_dir(report_dir);

  std::vector<pipeline::SourceFrame> corpus;
  corpus.reserve(paths.size());
  for (const auto& p : paths) corpus.push_back({p.stem().string(), io::read_png(p)});

  using Clock = std::chrono::steady_clock;
  auto run_pass = [&](Entry& e, bool record) {
    for (const auto& f : corpus) {
      const auto t0 = Clock::now();
      const auto instances = seg::detect(f.frame, f.frame_id, det, *provider);
      const double detect_us =
          std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
      auto out = pipeline::process_frame(f.frame, instances, e.spec, false);
      out.report.frame_id = f.frame_id;
      out.report.detect_us = detect_us;
      if (record) e.samples.push_back(std::move(out.report));
    }
  };
  for (auto& e : entries) run_pass(e, false);  // warm-up, not recorded
  for (int r = 0; r < c.repeats; ++r) {
    for (auto& e : entries) run_pass(e, true);
  }

  struct Row {
    std::string name;
    bool baseline_only;
    pipeline::StageStats detect, transform, compose, total;
  };
  std::vector<Row> rows;
  for (const auto& e : entries) {
    std::vector<double> d, t, co, tot;
    for (const auto& s : e.samples) {
      d.push_back(s.detect_us);
      t.push_back(s.transform_us);
      co.push_back(s.compose_us);
      tot.push_back(s.total_us());
    }
    rows.push_back({e.spec.preset_name, e.baseline_only, pipeline::summarize(d),
                    pipeline::summarize(t), pipeline::summarize(co), pipeline::summarize(tot)});
  }
  std::size_t raw_index = 0;
  while (entries[raw_index].spec.kind != MethodKind::kRaw) ++raw_index;
  const Row& raw = rows[raw_index];

  std::ostringstream bench_csv, overhead_csv;
  bench_csv << "preset,frames,repeats,samples,detect_median_us,detect_p95_us,"
               "transform_median_us,transform_p95_us,compose_median_us,compose_p95_us,"
               "total_median_us,total_p95_us\n";
  overhead_csv << "preset,total_median_us,overhead_total_vs_raw_pct,transform_median_us,"
                  "transform_delta_vs_raw_us,counterpart,overhead_total_vs_counterpart_pct,"
                  "overhead_transform_vs_counterpart_pct\n";
  json rows_json = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    const AnonymizerSpec& spec = entries[i].spec;
    bench_csv << r.name << ',' << corpus.size() << ',' << c.repeats << ','
              << entries[i].samples.size() << ',' << csv_num(r.detect.median) << ','
              << csv_num(r.detect.p95) << ',' << csv_num(r.transform.median) << ','
              << csv_num(r.transform.p95) << ',' << csv_num(r.compose.median) << ','
              << csv_num(r.compose.p95) << ',' << csv_num(r.total.median) << ','
              << csv_num(r.total.p95) << '\n';

    const double over_raw = pct(r.total.median, raw.total.median);
    json row = {{"preset", r.name},
                {"baseline_only", r.baseline_only},
                {"detect", pipeline::to_json(r.detect)},
                {"transform", pipeline::to_json(r.transform)},
                {"compose", pipeline::to_json(r.compose)},
                {"total", pipeline::to_json(r.total)},
                {"overhead_total_vs_raw_pct", over_raw},
                {"transform_delta_vs_raw_us", r.transform.median - raw.transform.median}};
    overhead_csv << r.name << ',' << csv_num(r.total.median) << ',' << csv_num(over_raw) << ','
                 << csv_num(r.transform.median) << ','
                 << csv_num(r.transform.median - raw.transform.median) << ',';
    std::optional<std::size_t> cp;
    if (spec.is_adaptive()) {
      for (std::size_t j = 0; j < entries.size(); ++j) {
        if (is_counterpart(spec, entries[j].spec)) {
          cp = j;
          break;
        }
      }
    }
    if (cp) {
      const Row& f = rows[*cp];
      const double ot = pct(r.total.median, f.total.median);
      const double otr = pct(r.transform.median, f.transform.median);
      overhead_csv << f.name << ',' << csv_num(ot) << ',' << csv_num(otr) << '\n';
      row["counterpart"] = f.name;
      row["overhead_total_vs_counterpart_pct"] = ot;
      row["overhead_transform_vs_counterpart_pct"] = otr;
    } else {
      overhead_csv << ",,\n";
    }
    rows_json.push_back(row);
  }
  write_text(report_dir / "bench.csv", bench_csv.str());
  write_text(report_dir / "bench_overhead.csv", overhead_csv.str());
  json doc = {{"frames", corpus.size()},
              {"repeats", c.repeats},
              {"warmup_passes", 1},
              {"presets", rows_json}};
  write_text(report_dir / "bench.json", doc.dump(2) + "\n");
  return doc;
}

json cmd_compare(const RunConfig& c) {
  const auto registry = build_registry(c);
  const auto names = requested_presets(c);
  if (names.size() < 2) fail(ErrorCode::kInvalidArgument, "compare needs at least two presets");
  std::vector<AnonymizerSpec> specs;
  for (const auto& n : names) specs.push_back(resolve_spec(c, registry, n));
  const seg::DetectorConfig det = detector_config(c);
  const auto paths = list_frames(c.input);
  auto provider = make_provider(c);
  prepare_output_dir(c.output);

  json files = json::array();
  for (const auto& p : paths) {
    const Frame frame = io::read_png(p);
    const auto instances = seg::detect(frame, p.stem().string(), det, *provider);
    std::vector<Frame> panels;
    for (const auto& s : specs) {
      panels.push_back(pipeline::process_frame(frame, instances, s, false).frame);
    }
    const Frame grid = grid::compose_grid(panels, names);
    const fs::path out = c.output / p.filename();
    io::write_png(out, grid);
    files.push_back(out.string());
  }
  return {{"frames", paths.size()},
          {"presets", names},
          {"gutter", grid::kGutter},
          {"label_band", grid::kLabelBand},
          {"files", files}};
}

json cmd_validate_masks(const fs::path& mask_dir) {
  require_input_dir(mask_dir, "mask directory");
  const auto ids = seg::list_sidecars(mask_dir);
  json violations = json::array();
  auto add = [&](const seg::Violation& v) {
    json j = {{"file", v.file}, {"field", v.field}, {"message", v.message}};
    if (v.instance_id) j["instance_id"] = *v.instance_id;
    if (v.byte_offset) j["byte_offset"] = *v.byte_offset;
    violations.push_back(j);
  };
  for (const auto& id : ids) {
    for (const auto& v : seg::validate_sidecar(mask_dir, id)) add(v);
  }
  const std::set<std::string> known(ids.begin(), ids.end());
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(mask_dir, ec)) {
    const std::string name = entry.path().filename().string();
    const std::string suffix = ".mask.png";
    if (name.size() <= suffix.size() ||
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) {
      continue;
    }
    const std::string id = name.substr(0, name.size() - suffix.size());
    if (!known.count(id)) add({entry.path().string(), "", "mask raster has no metadata file", {}, {}});
  }
  return {{"mask_dir", mask_dir.string()},
          {"frames_checked", ids.size()},
          {"valid", violations.empty()},
          {"violations", violations}};
}

}  // namespace la3d::cli
