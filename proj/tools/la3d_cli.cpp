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

// Command-line front end. Parses flags into a run-configuration document and
// hands it to the shared library through the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "la3d/la3d.h"

namespace {

using nlohmann::json;

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  2  invalid argument or configuration\n"
    "  3  unknown preset (available presets are listed on stderr)\n"
    "  4  input frame or directory unreadable\n"
    "  5  output or report directory unwritable\n"
    "  6  sidecar file not found\n"
    "  7  malformed sidecar or document\n"
    "  8  detector unavailable (provider failed, timed out or produced bad output)\n"
    "  9  contract violation (mismatched dimensions, out-of-bounds boxes)\n"
    " 10  degenerate input\n"
    " 11  internal error\n"
    "Environment: LA3D_LOG_LEVEL=error|warn|info|debug\n";

struct Flags {
  std::string config_path;
  std::string input, masks, provider_cmd, output, report_dir, z_ref, on_failure;
  std::vector<std::string> presets;
  double alpha_r = 0, alpha_b = 0, lambda = 0;
  int workers = 1, repeats = 3, provider_timeout_ms = 0;
  bool ismax = false, isfullblur = false, include_items = false, pad_small = false;
};

struct Options {
  CLI::Option* config = nullptr;
  CLI::Option* input = nullptr;
  CLI::Option* masks = nullptr;
  CLI::Option* provider_cmd = nullptr;
  CLI::Option* provider_timeout = nullptr;
  CLI::Option* output = nullptr;
  CLI::Option* preset = nullptr;
  CLI::Option* alpha_r = nullptr;
  CLI::Option* alpha_b = nullptr;
  CLI::Option* ismax = nullptr;
  CLI::Option* isfullblur = nullptr;
  CLI::Option* z_ref = nullptr;
  CLI::Option* lambda = nullptr;
  CLI::Option* include_items = nullptr;
  CLI::Option* pad_small = nullptr;
  CLI::Option* on_failure = nullptr;
  CLI::Option* workers = nullptr;
  CLI::Option* repeats = nullptr;
  CLI::Option* report_dir = nullptr;
};

Options add_run_options(CLI::App* cmd, Flags& f, bool multi_preset, bool with_repeats) {
  Options o;
  o.config = cmd->add_option("--config", f.config_path, "JSON run configuration; flags override it");
  o.input = cmd->add_option("--input", f.input, "Directory of PNG frames (lexicographic order)");
  o.masks = cmd->add_option("--masks", f.masks, "Directory of precomputed mask sidecars");
  o.provider_cmd = cmd->add_option("--provider-cmd", f.provider_cmd,
                                   "External mask provider command (gets MANIFEST OUTDIR)");
  o.provider_timeout = cmd->add_option("--provider-timeout-ms", f.provider_timeout_ms,
                                       "Per-frame provider timeout in milliseconds");
  o.output = cmd->add_option("--output", f.output, "Output directory");
  if (multi_preset) {
    o.preset = cmd->add_option("--preset", f.presets, "Preset names (repeat or comma-separate)")
                   ->delimiter(',');
  } else {
    o.preset = cmd->add_option("--preset", f.presets, "Preset name")->expected(1);
  }
  o.alpha_r = cmd->add_option("--alpha-r", f.alpha_r, "Global image-scale gain (> 0)");
  o.alpha_b = cmd->add_option("--alpha-b", f.alpha_b, "Upper boundary fraction in (0, 1]");
  o.ismax = cmd->add_flag("--ismax", f.ismax, "Border-maximum anonymization");
  o.isfullblur = cmd->add_flag("--isfullblur", f.isfullblur, "Scale blur sigma with r");
  o.z_ref = cmd->add_option("--z-ref", f.z_ref, "Reference resolution WxH; sets alpha_r = Z/Z_ref");
  o.lambda = cmd->add_option("--lambda", f.lambda, "Detection confidence threshold in [0, 1]");
  o.include_items = cmd->add_flag("--include-items", f.include_items,
                                  "Also anonymize bags, umbrellas, suitcases, phones, laptops");
  o.pad_small = cmd->add_flag("--pad-small-inputs", f.pad_small,
                              "Reversibly pad frames smaller than the inference size");
  o.on_failure = cmd->add_option("--on-detector-failure", f.on_failure, "abort | quarantine")
                     ->check(CLI::IsMember({"abort", "quarantine"}));
  o.workers = cmd->add_option("--workers", f.workers, "Frames processed concurrently");
  if (with_repeats) o.repeats = cmd->add_option("--repeats", f.repeats, "Timed passes (>= 3)");
  o.report_dir = cmd->add_option("--report-dir", f.report_dir,
                                 "Where reports go (defaults to --output)");
  return o;
}

bool given(const CLI::Option* o) { return o && o->count() > 0; }

json build_config(const Flags& f, const Options& o, bool multi_preset) {
  json doc = json::object();
  if (given(o.config)) {
    std::ifstream in(f.config_path);
    if (!in) throw std::runtime_error("cannot read config file '" + f.config_path + "'");
    doc = json::parse(in);
    if (!doc.is_object()) throw std::runtime_error("config file must hold a JSON object");
  }
  if (given(o.input)) doc["input"] = f.input;
  if (given(o.masks)) doc["masks"] = f.masks;
  if (given(o.provider_cmd)) doc["provider_cmd"] = f.provider_cmd;
  if (given(o.provider_timeout)) doc["provider_timeout_ms"] = f.provider_timeout_ms;
  if (given(o.output)) doc["output"] = f.output;
  if (given(o.preset)) {
    if (multi_preset) {
      doc["presets"] = f.presets;
      doc.erase("preset");
    } else {
      doc["preset"] = f.presets.front();
    }
  }
  if (given(o.alpha_r)) doc["alpha_r"] = f.alpha_r;
  if (given(o.alpha_b)) doc["alpha_b"] = f.alpha_b;
  if (given(o.ismax)) doc["ismax"] = f.ismax;
  if (given(o.isfullblur)) doc["isfullblur"] = f.isfullblur;
  if (given(o.z_ref)) doc["z_ref"] = f.z_ref;
  if (given(o.lambda)) doc["lambda"] = f.lambda;
  if (given(o.include_items)) doc["include_items"] = f.include_items;
  if (given(o.pad_small)) doc["pad_small_inputs"] = f.pad_small;
  if (given(o.on_failure)) doc["on_detector_failure"] = f.on_failure;
  if (given(o.workers)) doc["workers"] = f.workers;
  if (given(o.repeats)) doc["repeats"] = f.repeats;
  if (given(o.report_dir)) doc["report_dir"] = f.report_dir;
  return doc;
}

int report_failure(la3d_status status, const std::string& message) {
  json err = {{"error",
               {{"code", static_cast<int>(status)},
                {"status", la3d_status_name(status)},
                {"message", message}}}};
  std::cerr << err.dump() << "\n";
  if (status == LA3D_ERR_UNKNOWN_PRESET) {
    std::cerr << "available presets:\n" << la3d_preset_names();
  }
  return static_cast<int>(status);
}

int run_with_config(la3d_status (*fn)(const char*, char**), const json& config,
                    const char* command) {
  char* result = nullptr;
  const la3d_status st = fn(config.dump().c_str(), &result);
  if (st != LA3D_OK) return report_failure(st, la3d_last_error());
  json doc = json::parse(result);
  la3d_string_free(result);
  if (std::string(command) == "anonymize") {
    json brief = {{"command", command},
                  {"preset", doc.value("preset", "")},
                  {"frames", doc.value("frames", 0)},
                  {"quarantined", doc.value("quarantined", 0)}};
    std::cout << brief.dump() << "\n";
  } else {
    std::cout << doc.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"la3d: size-adaptive full-body anonymization of video frames"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  Flags fa, fb, fc;
  auto* anonymize = app.add_subcommand("anonymize", "Anonymize a directory of frames");
  const Options oa = add_run_options(anonymize, fa, false, false);
  auto* bench = app.add_subcommand("bench", "Per-stage latency benchmark over a frame corpus");
  const Options ob = add_run_options(bench, fb, true, true);
  auto* compare = app.add_subcommand("compare", "Side-by-side comparison grid per frame");
  const Options oc = add_run_options(compare, fc, true, false);

  std::string mask_dir, validate_report;
  auto* validate = app.add_subcommand("validate-masks", "Check sidecars against the format");
  validate->add_option("mask_dir", mask_dir, "Sidecar directory")->required();
  validate->add_option("--report-dir", validate_report, "Also write validation.json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(LA3D_ERR_INVALID_ARGUMENT);
  }

  try {
    if (anonymize->parsed()) {
      return run_with_config(&la3d_run_anonymize, build_config(fa, oa, false), "anonymize");
    }
    if (bench->parsed()) {
      return run_with_config(&la3d_run_bench, build_config(fb, ob, true), "bench");
    }
    if (compare->parsed()) {
      return run_with_config(&la3d_run_compare, build_config(fc, oc, true), "compare");
    }
    if (validate->parsed()) {
      char* result = nullptr;
      const la3d_status st = la3d_validate_masks(mask_dir.c_str(), &result);
      if (st != LA3D_OK) return report_failure(st, la3d_last_error());
      const std::string text = result;
      la3d_string_free(result);
      std::cout << text << "\n";
      if (!validate_report.empty()) {
        std::ofstream out(validate_report + "/validation.json");
        if (!out) {
          return report_failure(LA3D_ERR_OUTPUT_UNWRITABLE,
                                "cannot write " + validate_report + "/validation.json");
        }
        out << text << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    return report_failure(LA3D_ERR_INVALID_ARGUMENT, e.what());
  }
  return static_cast<int>(LA3D_ERR_INVALID_ARGUMENT);
}
