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

#include "la3d/la3d.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "../core/adaptive.hpp"
#include "../core/commands.hpp"
#include "../core/error.hpp"
#include "../core/log.hpp"
#include "../core/pipeline.hpp"
#include "../core/png_io.hpp"
#include "../core/report.hpp"
#include "../core/segmentation.hpp"

struct la3d_frame {
  la3d::Frame frame;
};

struct la3d_instances {
  std::vector<la3d::InstanceMask> items;
};

struct la3d_spec {
  la3d::AnonymizerSpec spec;
};

namespace {

thread_local std::string g_last_error;

la3d_status record(la3d_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
la3d_status guarded(Fn&& fn) {
  try {
    fn();
    return LA3D_OK;
  } catch (const la3d::Error& e) {
    return record(static_cast<la3d_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return record(LA3D_ERR_FORMAT, e.what());
  } catch (const std::bad_alloc&) {
    return record(LA3D_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(LA3D_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(LA3D_ERR_INTERNAL, "unknown failure");
  }
}

void need(const void* p, const char* what) {
  if (!p) la3d::fail(la3d::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

la3d_status run_command(const char* config_json, char** result_json,
                        nlohmann::json (*command)(const la3d::cli::RunConfig&)) {
  return guarded([&] {
    need(config_json, "config_json");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      la3d::fail(la3d::ErrorCode::kInvalidArgument,
                 std::string("config is not valid JSON: ") + e.what());
    }
    const nlohmann::json result = command(la3d::cli::parse_run_config(doc));
    if (result_json) *result_json = dup_string(result.dump(2));
  });
}

}  // namespace

extern "C" {

const char* la3d_version(void) { return "1.0.0"; }

const char* la3d_status_name(la3d_status status) {
  if (status == LA3D_OK) return "ok";
  return la3d::error_code_name(static_cast<la3d::ErrorCode>(static_cast<int>(status)));
}

const char* la3d_last_error(void) { return g_last_error.c_str(); }

void la3d_string_free(char* s) { std::free(s); }

const char* la3d_preset_names(void) {
  static const std::string names = [] {
    std::string s;
    for (const auto& n : la3d::pipeline::builtin_preset_names()) s += n + "\n";
    return s;
  }();
  return names.c_str();
}

la3d_status la3d_frame_create(uint32_t width, uint32_t height, const uint8_t* rgb,
                              la3d_frame** out) {
  return guarded([&] {
    need(rgb, "rgb");
    need(out, "out");
    const std::size_t n = static_cast<std::size_t>(width) * height * 3;
    std::vector<std::uint8_t> px(rgb, rgb + n);
    *out = new la3d_frame{la3d::Frame(static_cast<int>(width), static_cast<int>(height),
                                      std::move(px))};
  });
}

la3d_status la3d_frame_load_png(const char* path, la3d_frame** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new la3d_frame{la3d::io::read_png(path)};
  });
}

la3d_status la3d_frame_save_png(const la3d_frame* frame, const char* path) {
  return guarded([&] {
    need(frame, "frame");
    need(path, "path");
    la3d::io::write_png(path, frame->frame);
  });
}

uint32_t la3d_frame_width(const la3d_frame* frame) {
  return frame ? static_cast<uint32_t>(frame->frame.width()) : 0;
}

uint32_t la3d_frame_height(const la3d_frame* frame) {
  return frame ? static_cast<uint32_t>(frame->frame.height()) : 0;
}

const uint8_t* la3d_frame_data(const la3d_frame* frame) {
  return frame ? frame->frame.data().data() : nullptr;
}

void la3d_frame_free(la3d_frame* frame) { delete frame; }

la3d_status la3d_spec_from_preset(const char* name, la3d_spec** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = new la3d_spec{la3d::pipeline::resolve_preset(name)};
  });
}

la3d_status la3d_spec_set_adaptive(la3d_spec* spec, double alpha_r, double alpha_b, int ismax,
                                   int isfullblur) {
  return guarded([&] {
    need(spec, "spec");
    la3d::AnonymizerSpec s = spec->spec;
    s.adaptive.alpha_r = alpha_r;
    s.adaptive.alpha_b = alpha_b;
    s.adaptive.ismax = ismax != 0;
    s.adaptive.isfullblur = isfullblur != 0;
    if (!(alpha_r > 0.0) || !(alpha_b > 0.0 && alpha_b <= 1.0)) {
      la3d::fail(la3d::ErrorCode::kInvalidArgument,
                 "alpha_r must be positive and alpha_b must lie in (0, 1]");
    }
    spec->spec = s;
  });
}

la3d_status la3d_spec_set_z_ref(la3d_spec* spec, uint32_t width, uint32_t height) {
  return guarded([&] {
    need(spec, "spec");
    if (width == 0 || height == 0) {
      la3d::fail(la3d::ErrorCode::kInvalidArgument, "z_ref must be at least 1x1");
    }
    spec->spec.adaptive.z_ref = la3d::Resolution{static_cast<int>(width), static_cast<int>(height)};
  });
}

la3d_status la3d_spec_describe(const la3d_spec* spec, char** json_out) {
  return guarded([&] {
    need(spec, "spec");
    need(json_out, "json_out");
    const auto& s = spec->spec;
    nlohmann::json j = {{"preset", s.preset_name},
                        {"kind", la3d::method_kind_name(s.kind)},
                        {"kernel", {s.blur.k_h, s.blur.k_w}},
                        {"sigma", s.blur.sigma},
                        {"d", s.pixelize.d},
                        {"canny", {s.canny.low_threshold, s.canny.high_threshold}},
                        {"adaptive", s.is_adaptive()},
                        {"alpha_r", s.adaptive.alpha_r},
                        {"alpha_b", s.adaptive.alpha_b},
                        {"ismax", s.adaptive.ismax},
                        {"isfullblur", s.adaptive.isfullblur}};
    if (s.adaptive.z_ref) j["z_ref"] = {s.adaptive.z_ref->width, s.adaptive.z_ref->height};
    *json_out = dup_string(j.dump());
  });
}

void la3d_spec_free(la3d_spec* spec) { delete spec; }

la3d_status la3d_instances_create(la3d_instances** out) {
  return guarded([&] {
    need(out, "out");
    *out = new la3d_instances{};
  });
}

la3d_status la3d_instances_add(la3d_instances* list, uint32_t width, uint32_t height,
                               const uint8_t* mask, int32_t class_id, double score) {
  return guarded([&] {
    need(list, "list");
    need(mask, "mask");
    std::vector<std::uint8_t> bits(mask, mask + static_cast<std::size_t>(width) * height);
    list->items.push_back(la3d::make_instance(
        la3d::BinaryMask(static_cast<int>(width), static_cast<int>(height), std::move(bits)),
        class_id, score));
  });
}

la3d_status la3d_sidecar_load(const char* dir, const char* frame_id, la3d_instances** out) {
  return guarded([&] {
    need(dir, "dir");
    need(frame_id, "frame_id");
    need(out, "out");
    *out = new la3d_instances{la3d::seg::load_sidecar(dir, frame_id)};
  });
}

la3d_status la3d_sidecar_write(const char* dir, const char* frame_id, uint32_t width,
                               uint32_t height, const la3d_instances* list) {
  return guarded([&] {
    need(dir, "dir");
    need(frame_id, "frame_id");
    need(list, "list");
    la3d::seg::write_sidecar(dir, frame_id, static_cast<int>(width), static_cast<int>(height),
                             list->items);
  });
}

size_t la3d_instances_count(const la3d_instances* list) { return list ? list->items.size() : 0; }

la3d_status la3d_instances_box(const la3d_instances* list, size_t index, int32_t box_out[4]) {
  return guarded([&] {
    need(list, "list");
    need(box_out, "box_out");
    if (index >= list->items.size()) {
      la3d::fail(la3d::ErrorCode::kInvalidArgument, "instance index out of range");
    }
    const la3d::BBox& b = list->items[index].box;
    box_out[0] = b.x;
    box_out[1] = b.y;
    box_out[2] = b.w;
    box_out[3] = b.h;
  });
}

void la3d_instances_free(la3d_instances* list) { delete list; }

la3d_status la3d_anonymize(const la3d_frame* frame, const la3d_instances* instances,
                           const la3d_spec* spec, la3d_frame** out, char** report_json) {
  return guarded([&] {
    need(frame, "frame");
    need(instances, "instances");
    need(spec, "spec");
    need(out, "out");
    auto result = la3d::pipeline::process_frame(frame->frame, instances->items, spec->spec);
    if (report_json) *report_json = dup_string(la3d::pipeline::to_json(result.report).dump());
    *out = new la3d_frame{std::move(result.frame)};
  });
}

la3d_status la3d_run_anonymize(const char* config_json, char** result_json) {
  return run_command(config_json, result_json, &la3d::cli::cmd_anonymize);
}

la3d_status la3d_run_bench(const char* config_json, char** result_json) {
  return run_command(config_json, result_json, &la3d::cli::cmd_bench);
}

la3d_status la3d_run_compare(const char* config_json, char** result_json) {
  return run_command(config_json, result_json, &la3d::cli::cmd_compare);
}

la3d_status la3d_validate_masks(const char* mask_dir, char** result_json) {
  return guarded([&] {
    need(mask_dir, "mask_dir");
    const auto doc = la3d::cli::cmd_validate_masks(mask_dir);
    if (result_json) *result_json = dup_string(doc.dump(2));
  });
}

void la3d_set_log_level(int level) {
  if (level < 0) level = 0;
  if (level > 3) level = 3;
  la3d::log::set_level(static_cast<la3d::log::Level>(level));
}

}  // extern "C"
