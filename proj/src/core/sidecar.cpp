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
#include <array>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "segmentation.hpp"

namespace la3d::seg {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path sidecar_json_path(const fs::path& dir, const std::string& frame_id) {
  return dir / (frame_id + ".json");
}

fs::path sidecar_mask_path(const fs::path& dir, const std::string& frame_id) {
  return dir / (frame_id + ".mask.png");
}

std::string describe(const Violation& v) {
  std::ostringstream os;
  os << v.file;
  if (!v.field.empty()) os << ": " << v.field;
  if (v.instance_id) os << " (instance " << *v.instance_id << ")";
  if (v.byte_offset) os << " at byte " << *v.byte_offset;
  os << ": " << v.message;
  return os.str();
}

namespace {

std::string box_text(const BBox& b) {
  std::ostringstream os;
  os << "[" << b.x << "," << b.y << "," << b.w << "," << b.h << "]";
  return os.str();
}

struct MetaInstance {
  int id = 0;
  int class_id = 0;
  double score = 0.0;
  BBox bbox;
  std::size_t index = 0;
};

struct Parsed {
  std::vector<Violation> violations;
  bool missing = false;
  std::optional<ProviderResult> result;
};

bool is_int(const json& j) { return j.is_number_integer() || j.is_number_unsigned(); }

Parsed parse_sidecar(const fs::path& dir, const std::string& frame_id, bool build) {
  Parsed out;
  const fs::path jpath = sidecar_json_path(dir, frame_id);
  const fs::path mpath = sidecar_mask_path(dir, frame_id);
  const std::string jfile = jpath.string();
  auto violate = [&](const std::string& file, const std::string& field, const std::string& msg,
                     std::optional<int> id = std::nullopt) {
    out.violations.push_back(Violation{file, field, msg, id, std::nullopt});
  };

  std::ifstream in(jpath, std::ios::binary);
  if (!in) {
    out.missing = true;
    violate(jfile, "", "metadata file not found");
    return out;
  }
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    out.violations.push_back(Violation{jfile, "(document)", e.what(), std::nullopt, e.byte});
    return out;
  }
  if (!doc.is_object()) {
    violate(jfile, "(document)", "top-level value must be an object");
    return out;
  }

  if (!doc.contains("frame_id") || !doc["frame_id"].is_string()) {
    violate(jfile, "frame_id", "missing or not a string");
  } else if (doc["frame_id"].get<std::string>() != frame_id) {
    violate(jfile, "frame_id",
            "'" + doc["frame_id"].get<std::string>() + "' does not match file name '" +
                frame_id + "'");
  }
  int width = 0, height = 0;
  for (auto [key, dst] : {std::pair<const char*, int*>{"width", &width}, {"height", &height}}) {
    if (!doc.contains(key) || !is_int(doc[key]) || doc[key].get<long long>() < 1 ||
        doc[key].get<long long>() > 1 << 20) {
      violate(jfile, key, "missing or not a positive integer");
    } else {
      *dst = doc[key].get<int>();
    }
  }
  if (!doc.contains("instances") || !doc["instances"].is_array()) {
    violate(jfile, "instances", "missing or not an array");
    return out;
  }

  std::vector<MetaInstance> meta;
  std::array<int, kMaxInstanceId + 1> seen{};
  const json& list = doc["instances"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& item = list[i];
    const std::string prefix = "instances[" + std::to_string(i) + "]";
    if (!item.is_object()) {
      violate(jfile, prefix, "must be an object");
      continue;
    }
    MetaInstance m;
    m.index = i;
    bool ok = true;
    if (!item.contains("id") || !is_int(item["id"])) {
      violate(jfile, prefix + ".id", "missing or not an integer");
      ok = false;
    } else {
      const long long id = item["id"].get<long long>();
      if (id < 1 || id > kMaxInstanceId) {
        violate(jfile, prefix + ".id",
                "id " + std::to_string(id) + " out of range 1-" + std::to_string(kMaxInstanceId));
        ok = false;
      } else if (seen[static_cast<std::size_t>(id)]++) {
        violate(jfile, prefix + ".id", "duplicate id", static_cast<int>(id));
        ok = false;
      } else {
        m.id = static_cast<int>(id);
      }
    }
    const std::optional<int> id = ok ? std::optional<int>(m.id) : std::nullopt;
    if (!item.contains("class_id") || !is_int(item["class_id"])) {
      violate(jfile, prefix + ".class_id", "missing or not an integer", id);
      ok = false;
    } else {
      m.class_id = item["class_id"].get<int>();
    }
    if (!item.contains("score") || !item["score"].is_number()) {
      violate(jfile, prefix + ".score", "missing or not a number", id);
      ok = false;
    } else {
      m.score = item["score"].get<double>();
      if (!(m.score >= 0.0 && m.score <= 1.0)) {
        violate(jfile, prefix + ".score", "must lie in [0, 1]", id);
        ok = false;
      }
    }
    const json* bb = item.contains("bbox") ? &item["bbox"] : nullptr;
    if (!bb || !bb->is_array() || bb->size() != 4 ||
        !std::all_of(bb->begin(), bb->end(), [](const json& v) { return is_int(v); })) {
      violate(jfile, prefix + ".bbox", "must be an array of four integers [x,y,w,h]", id);
      ok = false;
    } else {
      m.bbox = BBox{(*bb)[0].get<int>(), (*bb)[1].get<int>(), (*bb)[2].get<int>(),
                    (*bb)[3].get<int>()};
      if (width > 0 && height > 0 && !m.bbox.fits_within(width, height)) {
        violate(jfile, prefix + ".bbox", "bbox " + box_text(m.bbox) + " exceeds frame bounds", id);
        ok = false;
      }
    }
    if (ok) meta.push_back(m);
  }

  std::ifstream probe(mpath, std::ios::binary);
  if (!probe) {
    out.missing = true;
    violate(mpath.string(), "", "mask raster not found");
    return out;
  }
  probe.close();
  io::GrayImage raster;
  try {
    raster = io::read_png_gray(mpath);
  } catch (const Error& e) {
    violate(mpath.string(), "(raster)", e.what());
    return out;
  }
  if (width > 0 && height > 0 && (raster.width != width || raster.height != height)) {
    violate(mpath.string(), "(raster)",
            "raster is " + std::to_string(raster.width) + "x" + std::to_string(raster.height) +
                " but metadata declares " + std::to_string(width) + "x" +
                std::to_string(height));
    return out;
  }
  if (width == 0 || height == 0) return out;

  struct Extent {
    int x0 = INT32_MAX, y0 = INT32_MAX, x1 = -1, y1 = -1;
    std::size_t count = 0;
  };
  std::array<Extent, kMaxInstanceId + 1> ext{};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int v = raster.pixels[static_cast<std::size_t>(y) * width + x];
      if (v == 0) continue;
      Extent& e = ext[static_cast<std::size_t>(v)];
      e.x0 = std::min(e.x0, x);
      e.y0 = std::min(e.y0, y);
      e.x1 = std::max(e.x1, x);
      e.y1 = std::max(e.y1, y);
      ++e.count;
    }
  }
  for (int v = 1; v <= kMaxInstanceId; ++v) {
    if (ext[static_cast<std::size_t>(v)].count > 0 && !seen[static_cast<std::size_t>(v)]) {
      violate(mpath.string(), "(raster)",
              "label " + std::to_string(v) + " has no metadata entry", v);
    }
  }
  for (const MetaInstance& m : meta) {
    const Extent& e = ext[static_cast<std::size_t>(m.id)];
    const BBox expected =
        e.count ? BBox{e.x0, e.y0, e.x1 - e.x0 + 1, e.y1 - e.y0 + 1} : BBox{0, 0, 0, 0};
    if (!(expected == m.bbox)) {
      violate(jfile, "instances[" + std::to_string(m.index) + "].bbox",
              "bbox " + box_text(m.bbox) + " disagrees with raster region " +
                  box_text(expected),
              m.id);
    }
  }

  if (!build || !out.violations.empty()) return out;

  std::sort(meta.begin(), meta.end(),
            [](const MetaInstance& a, const MetaInstance& b) { return a.id < b.id; });
  std::array<int, kMaxInstanceId + 1> slot;
  slot.fill(-1);
  std::vector<std::vector<std::uint8_t>> bits(meta.size());
  for (std::size_t k = 0; k < meta.size(); ++k) {
    slot[static_cast<std::size_t>(meta[k].id)] = static_cast<int>(k);
    bits[k].assign(static_cast<std::size_t>(width) * height, 0);
  }
  for (std::size_t i = 0; i < raster.pixels.size(); ++i) {
    const int s = slot[raster.pixels[i]];
    if (s >= 0) bits[static_cast<std::size_t>(s)][i] = 1;
  }
  ProviderResult result{width, height, {}};
  result.instances.reserve(meta.size());
  for (std::size_t k = 0; k < meta.size(); ++k) {
    result.instances.push_back(InstanceMask{BinaryMask(width, height, std::move(bits[k])),
                                            meta[k].bbox, meta[k].class_id, meta[k].score});
  }
  out.result = std::move(result);
  return out;
}

}  // namespace

void write_sidecar(const fs::path& dir, const std::string& frame_id, int width, int height,
                   std::span<const InstanceMask> instances) {
  if (instances.size() > static_cast<std::size_t>(kMaxInstanceId)) {
    fail(ErrorCode::kFormat, "frame '" + frame_id + "' has " + std::to_string(instances.size()) +
                                 " instances; a label raster holds at most " +
                                 std::to_string(kMaxInstanceId));
  }
  io::GrayImage raster{width, height,
                       std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, 0)};
  json list = json::array();
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const InstanceMask& inst = instances[k];
    if (inst.mask.width() != width || inst.mask.height() != height) {
      fail(ErrorCode::kContractViolation, "instance mask does not match sidecar dimensions");
    }
    const auto src = inst.mask.bits();
    const int id = static_cast<int>(k) + 1;
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (!src[i]) continue;
      if (raster.pixels[i] != 0) {
        fail(ErrorCode::kInvalidArgument,
             "instances " + std::to_string(raster.pixels[i]) + " and " + std::to_string(id) +
                 " overlap; a label raster cannot represent overlapping masks");
      }
      raster.pixels[i] = static_cast<std::uint8_t>(id);
    }
    const BBox b = tight_bbox(inst.mask).value_or(BBox{});
    list.push_back({{"id", id},
                    {"class_id", inst.class_id},
                    {"score", inst.score},
                    {"bbox", {b.x, b.y, b.w, b.h}}});
  }
  json doc = {{"frame_id", frame_id}, {"width", width}, {"height", height}, {"instances", list}};

  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(sidecar_json_path(dir, frame_id), std::ios::binary | std::ios::trunc);
  if (!out) {
    fail(ErrorCode::kOutputUnwritable,
         "cannot write " + sidecar_json_path(dir, frame_id).string());
  }
  out << doc.dump(2) << "\n";
  io::write_png_gray(sidecar_mask_path(dir, frame_id), raster);
}

std::vector<Violation> validate_sidecar(const fs::path& dir, const std::string& frame_id) {
  return parse_sidecar(dir, frame_id, false).violations;
}

std::vector<std::string> list_sidecars(const fs::path& dir) {
  std::vector<std::string> ids;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (p.extension() == ".json") ids.push_back(p.stem().string());
  }
  if (ec) fail(ErrorCode::kNotFound, dir.string() + ": " + ec.message());
  std::sort(ids.begin(), ids.end());
  return ids;
}

ProviderResult read_sidecar(const fs::path& dir, const std::string& frame_id) {
  Parsed p = parse_sidecar(dir, frame_id, true);
  if (p.missing) fail(ErrorCode::kNotFound, describe(p.violations.back()));
  if (!p.violations.empty()) fail(ErrorCode::kFormat, describe(p.violations.front()));
  return std::move(*p.result);
}

ProviderResult SidecarProvider::segment(const Frame&, const std::string& frame_id) {
  return read_sidecar(dir_, frame_id);
}

}  // namespace la3d::seg
