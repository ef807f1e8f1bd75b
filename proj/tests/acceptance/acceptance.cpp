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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. Optional arguments select criteria by
// name, e.g. `acceptance AC3 AC8`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/adaptive.hpp"
#include "core/filters.hpp"
#include "core/pipeline.hpp"
#include "core/png_io.hpp"
#include "core/segmentation.hpp"
#include "support/oracles.hpp"

using namespace la3d;
namespace t = la3d::testing;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return pipeline::percentile(v, 0.5);
}

int max_abs_diff(const Frame& a, const Frame& b) {
  int m = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::abs(int(a.data()[i]) - int(b.data()[i])));
  }
  return m;
}

bool outside_unchanged(const Frame& in, const Frame& out, const BinaryMask& region) {
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      if (!region.at(x, y) && !(in.at(x, y) == out.at(x, y))) return false;
    }
  }
  return true;
}

// Persons as upright ellipses, heights 30..200 px, width about 0.4 of height.
std::vector<InstanceMask> synthetic_persons(std::mt19937_64& rng, int w, int h, int count,
                                            bool allow_overlap) {
  std::uniform_int_distribution<int> height(30, std::min(200, h));
  std::uniform_real_distribution<double> aspect(0.3, 0.55);
  std::vector<InstanceMask> out;
  BinaryMask taken(w, h);
  for (int attempt = 0; static_cast<int>(out.size()) < count && attempt < 200; ++attempt) {
    const int bh = height(rng);
    const int bw = std::clamp(static_cast<int>(bh * aspect(rng)), 4, w);
    std::uniform_int_distribution<int> px(0, w - bw), py(0, h - bh);
    const BBox box{px(rng), py(rng), bw, bh};
    BinaryMask m = t::ellipse_mask(w, h, box);
    if (!allow_overlap) {
      bool clash = false;
      for (std::size_t i = 0; i < m.bits().size() && !clash; ++i) clash = m.bits()[i] && taken.bits()[i];
      if (clash) continue;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (m.at(x, y)) taken.set(x, y, true);
        }
      }
    }
    out.push_back(make_instance(std::move(m), 0, 0.9));
  }
  return out;
}

Outcome ac1_kernels() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> half(0, 50);
  std::uniform_real_distribution<double> sig(0.1, 50.0);
  double worst_sum = 0.0;
  bool symmetric = true;
  for (int n = 0; n < 200; ++n) {
    const filters::GaussianKernel k(2 * half(rng) + 1, sig(rng));
    const auto& g = k.coefficients();
    double s = 0.0;
    for (double v : g) s += v;
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
    for (int i = 0; i < k.size(); ++i) symmetric &= g[i] == g[k.size() - 1 - i];
  }
  const filters::GaussianKernel base(13, 10.0);
  const auto oracle = t::mp_gaussian(13, 10.0);
  double worst_coef = 0.0;
  for (int i = 0; i < 13; ++i) worst_coef = std::max(worst_coef, std::abs(base.coefficients()[i] - oracle[i]));
  const double secs = seconds_since(t0);
  const bool pass = worst_sum <= 1e-12 && symmetric && worst_coef <= 1e-12 && secs < 1.0;
  return {pass, fmt("200 kernels max|sum-1|=%.2e symmetric=%s; k=13/sigma=10 max coef err=%.2e; %.3f s",
                    worst_sum, symmetric ? "yes" : "no", worst_coef, secs)};
}

Outcome ac2_blur() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(102);
  std::uniform_int_distribution<int> dim(1, 128);
  std::uniform_real_distribution<double> sig(0.5, 12.0);
  int worst = 0, cases = 0;
  for (int n = 0; n < 50; ++n) {
    const Frame f = t::random_frame(rng, dim(rng), dim(rng));
    for (int k : {3, 13, 25}) {
      const double s = n % 5 == 0 ? 10.0 : sig(rng);
      const filters::GaussianKernel g(k, s);
      const Frame fast = filters::gaussian_blur(f, g, g);
      worst = std::max(worst, max_abs_diff(fast, t::naive_blur(f, g.coefficients(), g.coefficients())));
      ++cases;
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1 && secs < 30.0,
          fmt("%d frame/kernel cases, max abs diff vs naive 2-D convolution = %d; %.2f s", cases, worst, secs)};
}

Outcome ac3_pixelize() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<int> dim(1, 128);
  int cases = 0, mismatches = 0;
  for (int n = 0; n < 50; ++n) {
    const Frame f = t::random_frame(rng, dim(rng), dim(rng));
    const std::vector<std::pair<int, int>> ds{{1, 1}, {2, 2}, {4, 4}, {8, 8}, {f.width(), f.height()}};
    for (auto [dx, dy] : ds) {
      ++cases;
      if (!(filters::pixelize(f, dx, dy) == t::naive_pixelize(f, dx, dy))) ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 10.0,
          fmt("%d cases, %d not bit-exact vs block-mean oracle; %.2f s", cases, mismatches, secs)};
}

Outcome ac4_scaling() {
  const std::size_t frame_area = 100000000;  // 10000 x 10000
  double worst = 0.0;
  bool clamp_ok = true;
  int points = 0;
  for (double a : {0.5, 1.0, 2.0, 4.0}) {
    for (int i = 0; i < 1000; ++i) {
      const double rel = std::pow(10.0, -4.0 + 4.0 * i / 999.0);
      const auto area = static_cast<std::size_t>(std::llround(rel * static_cast<double>(frame_area)));
      const double r = adaptive::scaling_factor(area, frame_area, a);
      worst = std::max(worst, std::abs(r - t::mp_scaling_factor(area, frame_area, a)));
      if (100 * area <= frame_area) clamp_ok &= r == 1.0;
      ++points;
    }
  }
  // The same law through real masks.
  std::mt19937_64 rng(104);
  const Frame f(200, 100);
  for (int n = 0; n < 50; ++n) {
    BinaryMask m(200, 100);
    std::uniform_int_distribution<int> cnt(1, 20000);
    const int c = cnt(rng);
    for (int i = 0; i < c; ++i) m.set(i % 200, i / 200, true);
    const double r = adaptive::adaptive_scaler(f, m, 1.0);
    worst = std::max(worst, std::abs(r - t::mp_scaling_factor(static_cast<std::size_t>(c), 20000, 1.0)));
  }
  return {worst <= 1e-9 && clamp_ok,
          fmt("%d points (1000-point grid x alpha_r {0.5,1,2,4}) + 50 masks, max abs err=%.2e, floor clamp at <=1%%: %s",
              points, worst, clamp_ok ? "ok" : "violated")};
}

Outcome ac5_branches() {
  using namespace adaptive;
  const AdaptiveParams params;
  AdaptiveParams mx;
  mx.ismax = true;
  const BlurPlan b1 = plan_blur(40, 30, {13, 13, 10.0}, 3.0, params);
  const BlurPlan b2 = plan_blur(24, 24, {13, 13, 10.0}, 2.0, mx);
  const PixelizePlan p1 = plan_pixelize(20, 60, {4}, 2.30, params);
  const bool ex1 = b1 == BlurPlan{15, 19, 10.0};
  const bool ex2 = b2.k_h == 23 && b2.k_w == 23 && std::abs(b2.sigma - 3.8) < 1e-12;
  const bool ex3 = p1 == PixelizePlan{9, 9};

  std::mt19937_64 rng(105);
  std::uniform_int_distribution<int> dim(1, 500), kb(0, 12), db(1, 12);
  std::uniform_real_distribution<double> rr(1.0, 10.0), ab(0.01, 1.0);
  int violations = 0;
  for (int n = 0; n < 1000; ++n) {
    const int w = dim(rng), h = dim(rng);
    const double r = rr(rng);
    AdaptiveParams p;
    p.alpha_b = ab(rng);
    p.isfullblur = n % 2 == 0;
    const BlurBase base{2 * kb(rng) + 1, 2 * kb(rng) + 1, 6.0};
    const BlurPlan b = plan_blur(w, h, base, r, p);
    const int cap_h = odd_floor(std::max(p.alpha_b * h, 1.0), 1);
    const int cap_w = odd_floor(std::max(p.alpha_b * w, 1.0), 1);
    auto axis_ok = [](int k, int base_k, int cap) {
      if (k % 2 == 0 || k > cap) return false;
      return base_k <= cap ? k >= base_k : k == cap;
    };
    if (!axis_ok(b.k_h, base.k_h, cap_h) || !axis_ok(b.k_w, base.k_w, cap_w)) ++violations;
    if (b.sigma > std::max(b.k_h, b.k_w)) ++violations;

    const PixelizeBase pb{db(rng)};
    const PixelizePlan d = plan_pixelize(w, h, pb, r, p);
    const int cx = std::max(static_cast<int>(std::floor(p.alpha_b * w)), 1);
    const int cy = std::max(static_cast<int>(std::floor(p.alpha_b * h)), 1);
    auto d_ok = [](int v, int base_d, int cap) {
      return base_d <= cap ? (v >= base_d && v <= cap) : v == cap;
    };
    if (!d_ok(d.d_x, pb.d, cx) || !d_ok(d.d_y, pb.d, cy)) ++violations;
  }
  return {ex1 && ex2 && ex3 && violations == 0,
          fmt("K=[%d,%d] sigma=%.1f; ismax K=[%d,%d] sigma=%.2f; D=(%d,%d); %d bound violations in 1000 triples",
              b1.k_h, b1.k_w, b1.sigma, b2.k_h, b2.k_w, b2.sigma, p1.d_x, p1.d_y, violations)};
}

Outcome ac6_silhouette() {
  std::mt19937_64 rng(106);
  std::uniform_int_distribution<int> dim(8, 160);
  const AnonymizerSpec spec = pipeline::resolve_preset("PIXELIZED_A_MAX");
  int bad = 0;
  for (int n = 0; n < 100; ++n) {
    const int w = dim(rng), h = dim(rng);
    const Frame f = t::random_frame(rng, w, h);
    const InstanceMask inst = make_instance(t::ellipse_mask(w, h, t::random_box(rng, w, h, 2)));
    if (inst.box.empty()) {
      --n;
      continue;
    }
    const std::vector<InstanceMask> one{inst};
    const Frame out = anonymize_instances(f, one, spec).frame;
    const Rgb mean = t::naive_mean_color(crop(f, inst.box));
    bool ok = true;
    for (int y = 0; y < h && ok; ++y) {
      for (int x = 0; x < w && ok; ++x) ok = out.at(x, y) == (inst.mask.at(x, y) ? mean : f.at(x, y));
    }
    bad += ok ? 0 : 1;
  }
  return {bad == 0, fmt("100 instances, %d differ from the mean-color silhouette oracle", bad)};
}

Outcome ac7_composition() {
  std::mt19937_64 rng(107);
  std::uniform_int_distribution<int> count(0, 5);
  int checks = 0, bad = 0;
  for (int n = 0; n < 20; ++n) {
    const Frame f = t::random_frame(rng, 160, 120);
    const auto inst = synthetic_persons(rng, 160, 120, count(rng), true);
    const BinaryMask region = mask_union(inst, 160, 120);
    for (const auto& name : pipeline::builtin_preset_names()) {
      const Frame out = anonymize_instances(f, inst, pipeline::resolve_preset(name)).frame;
      ++checks;
      bad += outside_unchanged(f, out, region) ? 0 : 1;
    }
  }
  return {bad == 0, fmt("20 frames x %zu presets (%d runs), %d touched pixels outside the masks",
                        pipeline::builtin_preset_names().size(), checks, bad)};
}

Outcome ac8_cost() {
  const auto t0 = Clock::now();
  const int w = 320, h = 240, frames = 500, repeats = 3;
  t::TempDir dir("ac8");
  std::mt19937_64 rng(108);
  std::uniform_int_distribution<int> count(0, 5);
  std::vector<std::string> ids;
  std::vector<Frame> corpus;
  double fixed_taps = 0.0, adaptive_taps = 0.0;
  const AnonymizerSpec blur_a = pipeline::resolve_preset("BLURRED_A");
  for (int i = 0; i < frames; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "f%04d", i);
    ids.emplace_back(id);
    corpus.push_back(t::random_frame(rng, w, h));
    const auto persons = synthetic_persons(rng, w, h, count(rng), false);
    seg::write_sidecar(dir.path(), id, w, h, persons);
    for (const auto& p : persons) {
      const double r = adaptive::scaling_factor(mask_area(p.mask), w * h, 1.0);
      const auto plan = adaptive::plan_blur(p.box.w, p.box.h, blur_a.blur, r, blur_a.adaptive);
      const double px = static_cast<double>(p.box.w) * p.box.h;
      fixed_taps += px * 26.0;
      adaptive_taps += px * (plan.k_h + plan.k_w);
    }
  }

  const std::vector<std::string> presets{"RAW_IMAGE", "BLACKENED", "PIXELIZED_D4", "BLURRED",
                                         "PIXELIZED_D2", "PIXELIZED_D8", "BLURRED_A",
                                         "PIXELIZED_D2_A", "PIXELIZED_D4_A", "PIXELIZED_D8_A"};
  std::vector<AnonymizerSpec> specs;
  for (const auto& p : presets) specs.push_back(pipeline::resolve_preset(p));
  const seg::DetectorConfig cfg;
  seg::SidecarProvider provider(dir.path());

  // per preset, per frame, per repeat
  std::vector<std::vector<std::vector<double>>> transform(presets.size()), total(presets.size());
  for (std::size_t p = 0; p < presets.size(); ++p) {
    transform[p].assign(frames, {});
    total[p].assign(frames, {});
  }
  auto run_once = [&](std::size_t p, int i, bool record) {
    const auto d0 = Clock::now();
    const auto inst = seg::detect(corpus[i], ids[i], cfg, provider);
    const double detect_us = std::chrono::duration<double, std::micro>(Clock::now() - d0).count();
    const auto out = pipeline::process_frame(corpus[i], inst, specs[p], false);
    if (record) {
      transform[p][i].push_back(out.report.transform_us);
      total[p][i].push_back(detect_us + out.report.transform_us + out.report.compose_us);
    }
  };
  for (int i = 0; i < frames; i += 10) {
    for (std::size_t p = 0; p < presets.size(); ++p) run_once(p, i, false);
  }
  for (int rep = 0; rep < repeats; ++rep) {
    for (int i = 0; i < frames; ++i) {
      for (std::size_t k = 0; k < presets.size(); ++k) {
        run_once((k + static_cast<std::size_t>(i + rep)) % presets.size(), i, true);
      }
    }
  }
  std::map<std::string, double> med_tr, med_tot;
  for (std::size_t p = 0; p < presets.size(); ++p) {
    std::vector<double> tr, tot;
    for (int i = 0; i < frames; ++i) {
      tr.push_back(median(transform[p][i]));
      tot.push_back(median(total[p][i]));
    }
    med_tr[presets[p]] = median(tr);
    med_tot[presets[p]] = median(tot);
  }
  const bool ordered = med_tr["RAW_IMAGE"] < med_tr["BLACKENED"] &&
                       med_tr["BLACKENED"] < med_tr["PIXELIZED_D4"] &&
                       med_tr["PIXELIZED_D4"] < med_tr["BLURRED"];
  const std::vector<std::pair<std::string, std::string>> pairs{
      {"BLURRED_A", "BLURRED"},
      {"PIXELIZED_D2_A", "PIXELIZED_D2"},
      {"PIXELIZED_D4_A", "PIXELIZED_D4"},
      {"PIXELIZED_D8_A", "PIXELIZED_D8"}};
  bool overhead_ok = true;
  std::ostringstream oh;
  for (const auto& [a, f] : pairs) {
    const double total_pct = 100.0 * (med_tot[a] - med_tot[f]) / med_tot[f];
    const double tr_pct = 100.0 * (med_tr[a] - med_tr[f]) / med_tr[f];
    overhead_ok &= total_pct <= 10.0;
    oh << fmt(" %s vs %s %+.1f%% per-frame (%+.1f%% transform-only);", a.c_str(), f.c_str(),
              total_pct, tr_pct);
  }
  const double secs = seconds_since(t0);
  std::string detail = fmt("median transform us RAW=%.1f BLACKENED=%.1f PIXELIZED_D4=%.1f BLURRED=%.1f (%s);",
                           med_tr["RAW_IMAGE"], med_tr["BLACKENED"], med_tr["PIXELIZED_D4"],
                           med_tr["BLURRED"], ordered ? "ordered" : "NOT ordered");
  detail += oh.str();
  detail += fmt(" BLURRED_A filter taps per box pixel %.1fx fixed; %.1f s", adaptive_taps / fixed_taps, secs);
  return {ordered && overhead_ok && secs < 300.0, detail};
}

Outcome ac9_strength() {
  std::mt19937_64 rng(109);
  const auto full = [](int w, int h) {
    return std::vector<InstanceMask>{make_instance(BinaryMask(w, h, true))};
  };
  std::vector<double> h2, h4, h8;
  int w24 = 0, n24 = 0, w48 = 0, n48 = 0;
  for (int n = 0; n < 100; ++n) {
    const Frame c = t::random_frame(rng, 64, 96);
    const auto inst = full(64, 96);
    const double a = pipeline::proxy_metrics(c, filters::pixelize(c, 2, 2), inst).hf_ratio;
    const double b = pipeline::proxy_metrics(c, filters::pixelize(c, 4, 4), inst).hf_ratio;
    const double d = pipeline::proxy_metrics(c, filters::pixelize(c, 8, 8), inst).hf_ratio;
    h2.push_back(a);
    h4.push_back(b);
    h8.push_back(d);
    if (a != b) {
      ++n24;
      w24 += a > b ? 1 : 0;
    }
    if (b != d) {
      ++n48;
      w48 += b > d ? 1 : 0;
    }
  }
  const double m2 = median(h2), m4 = median(h4), m8 = median(h8);
  const double p24 = t::sign_test_p(w24, n24), p48 = t::sign_test_p(w48, n48);
  const bool hf_ok = m2 > m4 && m4 > m8 && p24 < 0.01 && p48 < 0.01;

  // Persons above e% of the frame, where r > 1 engages.
  const double e_pct = std::exp(1.0);
  const int w = 320, h = 240;
  const std::vector<std::pair<std::string, std::string>> pairs{
      {"BLURRED_A", "BLURRED"},
      {"PIXELIZED_D2_A", "PIXELIZED_D2"},
      {"PIXELIZED_D4_A", "PIXELIZED_D4"},
      {"PIXELIZED_D8_A", "PIXELIZED_D8"}};
  std::map<std::string, std::vector<double>> mse;
  int crops = 0;
  while (crops < 100) {
    const Frame f = t::random_frame(rng, w, h);
    const auto persons = synthetic_persons(rng, w, h, 1, false);
    if (persons.empty()) continue;
    const double rel = 100.0 * static_cast<double>(mask_area(persons[0].mask)) / (w * h);
    if (rel <= e_pct) continue;
    ++crops;
    for (const auto& [a, fx] : pairs) {
      for (const auto& name : {a, fx}) {
        const auto out = anonymize_instances(f, persons, pipeline::resolve_preset(name)).frame;
        mse[name].push_back(pipeline::proxy_metrics(f, out, persons).mse_mean);
      }
    }
  }
  bool mse_ok = true;
  std::ostringstream det;
  for (const auto& [a, fx] : pairs) {
    int wins = 0, trials = 0, below = 0;
    for (int i = 0; i < crops; ++i) {
      const double x = mse[a][i], y = mse[fx][i];
      below += x < y ? 1 : 0;
      if (x != y) {
        ++trials;
        wins += x > y ? 1 : 0;
      }
    }
    const double p = trials ? t::sign_test_p(wins, trials) : 1.0;
    const bool ok = below == 0 && median(mse[a]) >= median(mse[fx]) && p < 0.01;
    mse_ok &= ok;
    det << fmt(" %s>=%s median %.0f vs %.0f, p=%.1e, %d/%d crops lower;", a.c_str(), fx.c_str(),
               median(mse[a]), median(mse[fx]), p, below, crops);
  }
  return {hf_ok && mse_ok,
          fmt("hf medians D2=%.4f D4=%.4f D8=%.4f, sign p=%.1e/%.1e;", m2, m4, m8, p24, p48) + det.str()};
}

Outcome ac10_roundtrip() {
  std::mt19937_64 rng(110);
  t::TempDir dir("ac10");
  std::uniform_int_distribution<int> dim(1, 96), cnt(0, 8), cls(0, 79);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  int lossy = 0, invalid = 0;
  for (int n = 0; n < 100; ++n) {
    const int w = dim(rng), h = dim(rng);
    std::vector<InstanceMask> inst;
    BinaryMask taken(w, h);
    const int k = cnt(rng);
    for (int i = 0; i < k; ++i) {
      BinaryMask m(w, h);
      if (i % 4 != 3) {
        const BBox b = t::random_box(rng, w, h);
        const BinaryMask blob = (i % 2) ? t::ellipse_mask(w, h, b) : t::random_mask(rng, w, h, 0.3);
        for (int y = b.y; y < b.bottom(); ++y) {
          for (int x = b.x; x < b.right(); ++x) {
            if (blob.at(x, y) && !taken.at(x, y)) {
              m.set(x, y, true);
              taken.set(x, y, true);
            }
          }
        }
      }
      inst.push_back(make_instance(std::move(m), cls(rng), score(rng)));
    }
    const std::string id = "fx" + std::to_string(n);
    seg::write_sidecar(dir.path(), id, w, h, inst);
    invalid += seg::validate_sidecar(dir.path(), id).empty() ? 0 : 1;
    const seg::ProviderResult back = seg::read_sidecar(dir.path(), id);
    bool same = back.width == w && back.height == h && back.instances.size() == inst.size();
    for (std::size_t i = 0; same && i < inst.size(); ++i) {
      const auto& a = inst[i];
      const auto& b = back.instances[i];
      same = a.mask == b.mask && a.box == b.box && a.class_id == b.class_id && a.score == b.score;
    }
    lossy += same ? 0 : 1;
  }

  seg::DetectorConfig cfg;
  cfg.pad_small_inputs = true;
  int pad_bad = 0;
  for (int n = 0; n < 50; ++n) {
    const Frame f = t::random_frame(rng, 64, 128);
    const auto g = seg::plan_inference(64, 128, cfg);
    if (!(seg::unpad(seg::pad_replicate(f, g), g) == f)) ++pad_bad;
    const BinaryMask m = t::random_mask(rng, 64, 128, 0.4);
    BinaryMask padded(g.padded.width, g.padded.height);
    for (int y = 0; y < 128; ++y) {
      for (int x = 0; x < 64; ++x) padded.set(x + g.pad_left, y + g.pad_top, m.at(x, y));
    }
    const BinaryMask inference = seg::resize_mask_nearest(padded, g.inference.width, g.inference.height);
    if (!(seg::restore_mask(inference, g) == m)) ++pad_bad;
  }
  return {lossy == 0 && invalid == 0 && pad_bad == 0,
          fmt("100 sidecar fixtures: %d invalid, %d lossy; 64x128 padding: %d of 100 frame/mask round trips not bit-exact",
              invalid, lossy, pad_bad)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::pair<std::string, std::function<Outcome()>>>> criteria{
      {"AC1", {"kernel correctness", ac1_kernels}},
      {"AC2", {"blur oracle equivalence", ac2_blur}},
      {"AC3", {"pixelize oracle equivalence", ac3_pixelize}},
      {"AC4", {"scaling factor conformance", ac4_scaling}},
      {"AC5", {"adaptive branch coverage and bounds", ac5_branches}},
      {"AC6", {"ismax pixelize is the mean-color silhouette", ac6_silhouette}},
      {"AC7", {"composition safety", ac7_composition}},
      {"AC8", {"cost ordering and adaptive overhead", ac8_cost}},
      {"AC9", {"proxy strength monotonicity", ac9_strength}},
      {"AC10", {"format round trips", ac10_roundtrip}},
  };
  std::set<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [id, entry] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%-4s %s  %s: %s\n", id.c_str(), o.pass ? "PASS" : "FAIL", entry.first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
