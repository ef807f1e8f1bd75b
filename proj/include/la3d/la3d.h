/*
 * Copyright 2026 The LA3D Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the la3d anonymization engine.
 *
 * Every fallible call returns an la3d_status. On failure the calling thread's
 * la3d_last_error() holds a human-readable message until the next failing
 * call on that thread. Handles are opaque and owned by the caller, who
 * releases them with the matching *_free function. Strings returned through
 * `char**` out-parameters are released with la3d_string_free.
 *
 * Status values are also the exit codes of the la3d command-line tool.
 */

#ifndef LA3D_LA3D_H_
#define LA3D_LA3D_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LA3D_BUILDING_LIBRARY)
#    define LA3D_API __declspec(dllexport)
#  else
#    define LA3D_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__) || defined(__clang__)
#  define LA3D_API __attribute__((visibility("default")))
#else
#  define LA3D_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum la3d_status {
  LA3D_OK = 0,
  LA3D_ERR_INVALID_ARGUMENT = 2,   /* bad parameter or configuration */
  LA3D_ERR_UNKNOWN_PRESET = 3,     /* preset name not defined */
  LA3D_ERR_INPUT_UNREADABLE = 4,   /* input frame or directory unreadable */
  LA3D_ERR_OUTPUT_UNWRITABLE = 5,  /* output or report location unwritable */
  LA3D_ERR_NOT_FOUND = 6,          /* sidecar file missing */
  LA3D_ERR_FORMAT = 7,             /* sidecar or config document malformed */
  LA3D_ERR_DETECTOR_UNAVAILABLE = 8,
  LA3D_ERR_CONTRACT_VIOLATION = 9, /* mismatched dimensions, out-of-bounds boxes */
  LA3D_ERR_DEGENERATE_INPUT = 10,  /* e.g. scaling factor of an empty mask */
  LA3D_ERR_INTERNAL = 11
} la3d_status;

typedef struct la3d_frame la3d_frame;
typedef struct la3d_instances la3d_instances;
typedef struct la3d_spec la3d_spec;

LA3D_API const char* la3d_version(void);
LA3D_API const char* la3d_status_name(la3d_status status);
LA3D_API const char* la3d_last_error(void);
LA3D_API void la3d_string_free(char* s);

/* Newline-separated list of the built-in preset names. Static storage. */
LA3D_API const char* la3d_preset_names(void);

/* Frames: 8-bit interleaved RGB, row-major, top-left origin. */
LA3D_API la3d_status la3d_frame_create(uint32_t width, uint32_t height, const uint8_t* rgb,
                                       la3d_frame** out);
LA3D_API la3d_status la3d_frame_load_png(const char* path, la3d_frame** out);
LA3D_API la3d_status la3d_frame_save_png(const la3d_frame* frame, const char* path);
LA3D_API uint32_t la3d_frame_width(const la3d_frame* frame);
LA3D_API uint32_t la3d_frame_height(const la3d_frame* frame);
LA3D_API const uint8_t* la3d_frame_data(const la3d_frame* frame);
LA3D_API void la3d_frame_free(la3d_frame* frame);

/* Anonymizer specs. */
LA3D_API la3d_status la3d_spec_from_preset(const char* name, la3d_spec** out);
LA3D_API la3d_status la3d_spec_set_adaptive(la3d_spec* spec, double alpha_r, double alpha_b,
                                            int ismax, int isfullblur);
LA3D_API la3d_status la3d_spec_set_z_ref(la3d_spec* spec, uint32_t width, uint32_t height);
/* JSON description of the resolved spec. */
LA3D_API la3d_status la3d_spec_describe(const la3d_spec* spec, char** json_out);
LA3D_API void la3d_spec_free(la3d_spec* spec);

/* Instance masks. */
LA3D_API la3d_status la3d_instances_create(la3d_instances** out);
/* Appends one instance from a width*height byte mask (nonzero = set). */
LA3D_API la3d_status la3d_instances_add(la3d_instances* list, uint32_t width, uint32_t height,
                                        const uint8_t* mask, int32_t class_id, double score);
LA3D_API la3d_status la3d_sidecar_load(const char* dir, const char* frame_id,
                                       la3d_instances** out);
LA3D_API la3d_status la3d_sidecar_write(const char* dir, const char* frame_id, uint32_t width,
                                        uint32_t height, const la3d_instances* list);
LA3D_API size_t la3d_instances_count(const la3d_instances* list);
/* Box of instance `index` as x, y, w, h. */
LA3D_API la3d_status la3d_instances_box(const la3d_instances* list, size_t index,
                                        int32_t box_out[4]);
LA3D_API void la3d_instances_free(la3d_instances* list);

/* Anonymizes one frame. `report_json` may be NULL. */
LA3D_API la3d_status la3d_anonymize(const la3d_frame* frame, const la3d_instances* instances,
                                    const la3d_spec* spec, la3d_frame** out,
                                    char** report_json);

/*
 * Run-level commands. `config_json` is a run configuration document (see the
 * README for keys); the result document is returned through `result_json`.
 */
LA3D_API la3d_status la3d_run_anonymize(const char* config_json, char** result_json);
LA3D_API la3d_status la3d_run_bench(const char* config_json, char** result_json);
LA3D_API la3d_status la3d_run_compare(const char* config_json, char** result_json);
LA3D_API la3d_status la3d_validate_masks(const char* mask_dir, char** result_json);

/* 0 error, 1 warn, 2 info, 3 debug. Overrides LA3D_LOG_LEVEL. */
LA3D_API void la3d_set_log_level(int level);

#ifdef __cplusplus
}
#endif

#endif /* LA3D_LA3D_H_ */
