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

// End-to-end runs of the command-line binary against generated fixtures.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/png_io.hpp"
#include "core/segmentation.hpp"
#include "support/oracles.hpp"

#ifndef LA3D_CLI_PATH
#error "LA3D_CLI_PATH must name the la3d binary"
#endif

using namespace la3d;
namespace fs = std::filesystem;
namespace t = la3d::testing;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Run la3d_run(const fs::path& scratch, const std::string& args) {
  const fs::path o = scratch / "stdout.txt", e = scratch / "stderr.txt";
  const std::string cmd = std::string("'") + LA3D_CLI_PATH + "' " + args + " > '" + o.string() +
                          "' 2> '" + e.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(o);
  r.err = slurp(e);
  return r;
}

struct Fixture {
  explicit Fixture(int frames, int w = 64, int h = 48) : dir("cli") {
    fs::create_directories(in());
    std::mt19937_64 rng(77);
    for (int i = 0; i < frames; ++i) {
      const std::string id = "frame_" + std::to_string(i);
      const Frame f = t::random_frame(rng, w, h);
      io::write_png(in() / (id + ".png"), f);
      std::vector<InstanceMask> inst{
          make_instance(t::ellipse_mask(w, h, {2 + i, 3, w / 3, h / 2}), 0, 0.9),
          make_instance(t::ellipse_mask(w, h, {w / 2, h / 3, w / 3, h / 2}), 0, 0.6)};
      seg::write_sidecar(masks(), id, w, h, inst);
      inputs.push_back(f);
      instances.push_back(inst);
    }
  }
  fs::path in() const { return dir.path() / "in"; }
  fs::path masks() const { return dir.path() / "masks"; }
  fs::path out(const std::string& name = "out") const { return dir.path() / name; }
  std::string base(const std::string& out_name = "out") const {
    return "--input '" + in().string() + "' --masks '" + masks().string() + "' --output '" +
           out(out_name).string() + "'";
  }

  t::TempDir dir;
  std::vector<Frame> inputs;
  std::vector<std::vector<InstanceMask>> instances;
};

json strip_timing(json j) {
  if (j.is_object()) {
    for (const char* k : {"timing", "detect", "transform", "compose", "total", "wall_seconds",
                          "throughput_fps"}) {
      j.erase(k);
    }
    for (auto& [k, v] : j.items()) v = strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timing(v);
  }
  return j;
}

}  // namespace

TEST_CASE("help documents exit codes") {
  t::TempDir d("help");
  const Run r = la3d_run(d.path(), "--help");
  CHECK(r.code == 0);
  CHECK(r.out.find("Exit codes") != std::string::npos);
  CHECK(r.out.find("unknown preset") != std::string::npos);
  CHECK(la3d_run(d.path(), "").code == 2);
  CHECK(la3d_run(d.path(), "anonymize --bogus").code == 2);
}

TEST_CASE("empty input directory succeeds with zero frames") {
  t::TempDir d("empty");
  fs::create_directories(d.path() / "in");
  const Run r = la3d_run(d.path(), "anonymize --input '" + (d.path() / "in").string() +
                                       "' --masks '" + d.path().string() + "' --output '" +
                                       (d.path() / "out").string() + "' --preset BLURRED");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["frames"] == 0);
  const json s = json::parse(slurp(d.path() / "out" / "summary.json"));
  CHECK(s["frames"] == 0);
}

TEST_CASE("anonymize writes frames and keeps outside-mask bytes") {
  Fixture fx(3);
  const Run r = la3d_run(fx.dir.path(), "anonymize " + fx.base() + " --preset BLACKENED");
  REQUIRE(r.code == 0);
  for (int i = 0; i < 3; ++i) {
    const Frame out = io::read_png(fx.out() / ("frame_" + std::to_string(i) + ".png"));
    const BinaryMask u = mask_union(fx.instances[i], out.width(), out.height());
    const Frame& in = fx.inputs[i];
    for (int y = 0; y < in.height(); ++y) {
      for (int x = 0; x < in.width(); ++x) {
        CHECK(out.at(x, y) == (u.at(x, y) ? Rgb{0, 0, 0} : in.at(x, y)));
      }
    }
  }
  const json s = json::parse(slurp(fx.out() / "summary.json"));
  CHECK(s["frames"] == 3);
  CHECK(s["preset"] == "BLACKENED");
  const std::string csv = slurp(fx.out() / "per-frame.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("runs are reproducible") {
  Fixture fx(3);
  const std::string flags = " --preset BLURRED_A --alpha-r 2 --workers 2";
  REQUIRE(la3d_run(fx.dir.path(), "anonymize " + fx.base("a") + flags).code == 0);
  REQUIRE(la3d_run(fx.dir.path(), "anonymize " + fx.base("b") + flags).code == 0);
  for (int i = 0; i < 3; ++i) {
    const std::string n = "frame_" + std::to_string(i) + ".png";
    CHECK(slurp(fx.out("a") / n) == slurp(fx.out("b") / n));
  }
  CHECK(strip_timing(json::parse(slurp(fx.out("a") / "summary.json"))) ==
        strip_timing(json::parse(slurp(fx.out("b") / "summary.json"))));
}

TEST_CASE("config file with flag overrides") {
  Fixture fx(2);
  const fs::path cfg = fx.dir.path() / "run.json";
  std::ofstream(cfg) << json{{"input", fx.in().string()},
                             {"masks", fx.masks().string()},
                             {"output", fx.out().string()},
                             {"preset", "BLACKENED"},
                             {"report_dir", (fx.dir.path() / "reports").string()}}
                            .dump();
  const Run r = la3d_run(fx.dir.path(), "anonymize --config '" + cfg.string() +
                                            "' --preset PIXELIZED_D8_A --alpha-b 0.25");
  REQUIRE(r.code == 0);
  const json s = json::parse(slurp(fx.dir.path() / "reports" / "summary.json"));
  CHECK(s["preset"] == "PIXELIZED_D8_A");
  CHECK(s["spec"]["alpha_b"] == 0.25);
  CHECK(fs::exists(fx.out() / "frame_0.png"));
}

TEST_CASE("error classes map to distinct exit codes") {
  Fixture fx(1);
  const Run unknown = la3d_run(fx.dir.path(), "anonymize " + fx.base() + " --preset NOPE");
  CHECK(unknown.code == 3);
  CHECK(unknown.err.find("PIXELIZED_D2_A") != std::string::npos);
  const json e = json::parse(unknown.err.substr(0, unknown.err.find('\n')));
  CHECK(e["error"]["code"] == 3);
  CHECK(e["error"]["status"] == "unknown_preset");

  CHECK(la3d_run(fx.dir.path(), "anonymize --input '" + (fx.dir.path() / "nope").string() +
                                    "' --masks '" + fx.masks().string() + "' --output '" +
                                    fx.out().string() + "' --preset BLURRED")
            .code == 4);
  std::ofstream(fx.dir.path() / "blocker") << "x";
  CHECK(la3d_run(fx.dir.path(), "anonymize --input '" + fx.in().string() + "' --masks '" +
                                    fx.masks().string() + "' --output '" +
                                    (fx.dir.path() / "blocker" / "out").string() +
                                    "' --preset BLURRED")
            .code == 5);
  CHECK(la3d_run(fx.dir.path(), "anonymize " + fx.base() + " --preset BLURRED_A --alpha-b 2").code == 2);
  CHECK(la3d_run(fx.dir.path(), "anonymize " + fx.base() + " --preset BLURRED --z-ref 12").code == 2);
  CHECK(la3d_run(fx.dir.path(), "anonymize " + fx.base() + " --preset BLURRED --lambda 7").code == 2);
  CHECK(la3d_run(fx.dir.path(), "anonymize --input '" + fx.in().string() + "' --output '" +
                                    fx.out().string() + "' --preset BLURRED")
            .code == 2);

  fs::remove(seg::sidecar_json_path(fx.masks(), "frame_0"));
  CHECK(la3d_run(fx.dir.path(), "anonymize " + fx.base() + " --preset BLURRED").code == 8);
}

TEST_CASE("detector failure policy from the command line") {
  Fixture fx(3);
  const std::string prov = " --provider-cmd 'exit 1' --preset BLURRED";
  const std::string io = "--input '" + fx.in().string() + "' --output '" + fx.out().string() + "'";
  CHECK(la3d_run(fx.dir.path(), "anonymize " + io + prov).code == 8);
  const Run q = la3d_run(fx.dir.path(), "anonymize " + io + prov + " --on-detector-failure quarantine");
  REQUIRE(q.code == 0);
  CHECK(json::parse(q.out)["quarantined"] == 3);
  CHECK(io::read_png(fx.out() / "quarantine" / "frame_1.png") == fx.inputs[1]);
  CHECK_FALSE(fs::exists(fx.out() / "frame_1.png"));
}

TEST_CASE("validate-masks reports violations") {
  Fixture fx(2);
  const Run ok = la3d_run(fx.dir.path(), "validate-masks '" + fx.masks().string() + "'");
  REQUIRE(ok.code == 0);
  CHECK(json::parse(ok.out)["valid"] == true);

  json doc = json::parse(slurp(seg::sidecar_json_path(fx.masks(), "frame_1")));
  doc["instances"][1]["bbox"][0] = doc["instances"][1]["bbox"][0].get<int>() + 1;
  std::ofstream(seg::sidecar_json_path(fx.masks(), "frame_1")) << doc.dump();
  const Run bad = la3d_run(fx.dir.path(), "validate-masks '" + fx.masks().string() + "'");
  CHECK(bad.code == 0);
  const json rep = json::parse(bad.out);
  CHECK(rep["valid"] == false);
  REQUIRE(rep["violations"].size() == 1);
  CHECK(rep["violations"][0]["instance_id"] == 2);
  CHECK(la3d_run(fx.dir.path(), "validate-masks '" + (fx.dir.path() / "none").string() + "'").code == 4);
}

TEST_CASE("bench reports a zero-overhead baseline") {
  Fixture fx(2);
  CHECK(la3d_run(fx.dir.path(), "bench " + fx.base() + " --preset RAW_IMAGE --repeats 2").code == 2);
  const Run r = la3d_run(fx.dir.path(), "bench " + fx.base() + " --preset RAW_IMAGE --repeats 3");
  REQUIRE(r.code == 0);
  const std::string overhead = slurp(fx.out() / "bench_overhead.csv");
  CHECK(overhead.find("RAW_IMAGE") != std::string::npos);
  const json b = json::parse(slurp(fx.out() / "bench.json"));
  REQUIRE(b["presets"].size() == 1);
  CHECK(b["presets"][0]["overhead_total_vs_raw_pct"] == 0.0);

  const Run two = la3d_run(fx.dir.path(), "bench " + fx.base("o2") +
                                              " --preset BLURRED,BLURRED_A --repeats 3");
  REQUIRE(two.code == 0);
  const json b2 = json::parse(slurp(fx.out("o2") / "bench.json"));
  CHECK(b2["presets"].size() == 3);
  CHECK(slurp(fx.out("o2") / "bench.csv").find("BLURRED_A") != std::string::npos);
}

TEST_CASE("compare grid layout and panels") {
  Fixture fx(1);
  CHECK(la3d_run(fx.dir.path(), "compare " + fx.base() + " --preset BLURRED").code == 2);
  REQUIRE(la3d_run(fx.dir.path(), "compare " + fx.base() + " --preset RAW_IMAGE,BLACKENED").code == 0);
  const Frame g = io::read_png(fx.out() / "frame_0.png");
  const Frame& in = fx.inputs[0];
  CHECK(g.width() == 2 * in.width() + 4);
  CHECK(crop(g, {0, g.height() - in.height(), in.width(), in.height()}) == in);
}

TEST_CASE("compare shows larger blocks for large persons with adaptive pixelization") {
  t::TempDir d("cmp");
  fs::create_directories(d.path() / "in");
  const int w = 320, h = 240;
  std::mt19937_64 rng(78);
  const Frame f = t::random_frame(rng, w, h);
  io::write_png(d.path() / "in" / "x.png", f);
  const BBox big{150, 10, 140, 220};
  std::vector<InstanceMask> inst{make_instance(t::ellipse_mask(w, h, {10, 100, 20, 40})),
                                 make_instance(t::ellipse_mask(w, h, big))};
  seg::write_sidecar(d.path() / "masks", "x", w, h, inst);
  REQUIRE(la3d_run(d.path(), "compare --input '" + (d.path() / "in").string() + "' --masks '" +
                                 (d.path() / "masks").string() + "' --output '" +
                                 (d.path() / "out").string() + "' --preset PIXELIZED_D4,PIXELIZED_D4_A")
              .code == 0);
  const Frame g = io::read_png(d.path() / "out" / "x.png");
  const int top = g.height() - h;
  auto mean_run = [&](int panel) {
    const int x0 = panel * (w + 4);
    const int y = top + big.y + big.h / 2;
    int runs = 1, len = 0;
    for (int x = big.x + big.w / 4; x < big.x + 3 * big.w / 4; ++x, ++len) {
      if (!(g.at(x0 + x, y) == g.at(x0 + x - 1, y))) ++runs;
    }
    return static_cast<double>(len) / runs;
  };
  CHECK(mean_run(1) > mean_run(0));
}
