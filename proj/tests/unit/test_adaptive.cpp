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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "core/adaptive.hpp"
#include "core/filters.hpp"
#include "support/expect.hpp"
#include "support/oracles.hpp"

using namespace la3d;
using namespace la3d::adaptive;
namespace t = la3d::testing;

namespace {

AnonymizerSpec spec_of(MethodKind kind) {
  AnonymizerSpec s;
  s.preset_name = method_kind_name(kind);
  s.kind = kind;
  return s;
}

BinaryMask box_mask(int w, int h, const BBox& b) {
  BinaryMask m(w, h);
  for (int y = b.y; y < b.bottom(); ++y) {
    for (int x = b.x; x < b.right(); ++x) m.set(x, y, true);
  }
  return m;
}

Frame upscale(const Frame& f, int s) {
  Frame out(f.width() * s, f.height() * s);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) out.set(x, y, f.at(x / s, y / s));
  }
  return out;
}

BinaryMask upscale(const BinaryMask& m, int s) {
  BinaryMask out(m.width() * s, m.height() * s);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) out.set(x, y, m.at(x / s, y / s));
  }
  return out;
}

}  // namespace

TEST_CASE("scaling factor examples") {
  CHECK(scaling_factor(1, 100, 1.0) == 1.0);
  CHECK(scaling_factor(10, 100, 1.0) == doctest::Approx(2.302585).epsilon(1e-7));
  CHECK(scaling_factor(27183, 1000000, 2.0) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(t::error_of([] { scaling_factor(0, 100, 1.0); }) == ErrorCode::kDegenerateInput);
  CHECK(t::error_of([] { scaling_factor(5, 100, 0.0); }) == ErrorCode::kInvalidArgument);
  CHECK(t::error_of([] { scaling_factor(101, 100, 1.0); }) == ErrorCode::kContractViolation);

  const Frame f(20, 10);
  CHECK(t::error_of([&] { adaptive_scaler(f, BinaryMask(20, 10), 1.0); }) ==
        ErrorCode::kDegenerateInput);
  CHECK(t::error_of([&] { adaptive_scaler(f, BinaryMask(10, 10, true), 1.0); }) ==
        ErrorCode::kContractViolation);
  CHECK(adaptive_scaler(f, box_mask(20, 10, {0, 0, 20, 10}), 1.0) ==
        doctest::Approx(std::log(100.0)));
}

TEST_CASE("scaling factor is monotone in area and never below one") {
  for (double a : {0.5, 1.0, 2.0, 4.0}) {
    double prev = 0.0;
    for (std::size_t area = 1; area <= 10000; area += 37) {
      const double r = scaling_factor(area, 10000, a);
      CHECK(r >= 1.0);
      CHECK(r >= prev);
      prev = r;
    }
  }
}

TEST_CASE("sigma heuristic and odd_floor") {
  CHECK(sigma_from_kernel(1) == doctest::Approx(0.5));
  CHECK(sigma_from_kernel(3) == doctest::Approx(0.8));
  CHECK(sigma_from_kernel(13) == doctest::Approx(2.3));
  CHECK(odd_floor(26.0, 13) == 25);
  CHECK(odd_floor(13.0, 13) == 13);
  CHECK(odd_floor(12.4, 13) == 13);
  CHECK(odd_floor(0.7, 1) == 1);
}

TEST_CASE("blur plan worked examples") {
  const AdaptiveParams params;
  const BlurBase base{13, 13, 10.0};
  CHECK(plan_blur(40, 30, base, 1.0, params) == BlurPlan{13, 13, 10.0});
  CHECK(plan_blur(40, 30, base, 3.0, params) == BlurPlan{15, 19, 10.0});

  AdaptiveParams mx;
  mx.ismax = true;
  const BlurPlan p = plan_blur(24, 24, base, 1.7, mx);
  CHECK(p.k_h == 23);
  CHECK(p.k_w == 23);
  CHECK(p.sigma == doctest::Approx(3.8));

  AdaptiveParams full;
  full.isfullblur = true;
  const BlurPlan q = plan_blur(400, 300, base, 2.0, full);
  CHECK(q == BlurPlan{25, 25, 20.0});
  // sigma is capped by the largest realized kernel size
  const BlurPlan capped = plan_blur(400, 300, base, 4.0, full);
  CHECK(capped.k_h == 51);
  CHECK(capped.sigma == doctest::Approx(40.0));
  const BlurPlan tiny = plan_blur(6, 4, {3, 3, 10.0}, 1.0, full);
  CHECK(tiny.sigma == doctest::Approx(3.0));
}

TEST_CASE("pixelize plan worked examples") {
  const AdaptiveParams params;
  CHECK(plan_pixelize(20, 60, PixelizeBase{4}, 2.30, params) == PixelizePlan{9, 9});
  CHECK(plan_pixelize(40, 40, PixelizeBase{4}, 1.0, params) == PixelizePlan{4, 4});
  // caps below d_base win
  CHECK(plan_pixelize(5, 40, PixelizeBase{4}, 1.0, params) == PixelizePlan{2, 4});
  AdaptiveParams mx;
  mx.ismax = true;
  CHECK(plan_pixelize(17, 31, PixelizeBase{4}, 3.0, mx) == PixelizePlan{17, 31});
}

TEST_CASE("boundary conditions hold on random plans") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> dim(1, 400), kb(0, 10), db(1, 10);
  std::uniform_real_distribution<double> rr(1.0, 8.0), ab(0.01, 1.0);
  for (int n = 0; n < 2000; ++n) {
    const int w = dim(rng), h = dim(rng);
    const double r = rr(rng);
    AdaptiveParams p;
    p.alpha_b = ab(rng);
    const BlurBase base{2 * kb(rng) + 1, 2 * kb(rng) + 1, 5.0};
    const BlurPlan b = plan_blur(w, h, base, r, p);
    const int cap_h = odd_floor(std::max(p.alpha_b * h, 1.0), 1);
    const int cap_w = odd_floor(std::max(p.alpha_b * w, 1.0), 1);
    CHECK(b.k_h % 2 == 1);
    CHECK(b.k_w % 2 == 1);
    CHECK(b.k_h <= std::max(cap_h, 1));
    CHECK(b.k_w <= std::max(cap_w, 1));
    if (base.k_h <= cap_h) CHECK(b.k_h >= base.k_h);
    if (base.k_w <= cap_w) CHECK(b.k_w >= base.k_w);

    const PixelizeBase pb{db(rng)};
    const PixelizePlan d = plan_pixelize(w, h, pb, r, p);
    const int dcap_x = std::max(static_cast<int>(std::floor(p.alpha_b * w)), 1);
    const int dcap_y = std::max(static_cast<int>(std::floor(p.alpha_b * h)), 1);
    if (pb.d <= dcap_x) {
      CHECK(d.d_x >= pb.d);
      CHECK(d.d_x <= dcap_x);
    } else {
      CHECK(d.d_x == dcap_x);
    }
    if (pb.d <= dcap_y) {
      CHECK(d.d_y >= pb.d);
      CHECK(d.d_y <= dcap_y);
    } else {
      CHECK(d.d_y == dcap_y);
    }
  }
}

TEST_CASE("adaptive transforms apply their plans") {
  std::mt19937_64 rng(13);
  const Frame crop = t::random_frame(rng, 40, 30);
  const AdaptiveParams params;
  const Frame blurred = adaptive_blur(crop, {13, 13, 10.0}, 3.0, params);
  const filters::GaussianKernel kh(19, 10.0), kv(15, 10.0);
  CHECK(blurred == filters::gaussian_blur(crop, kh, kv));

  const Frame px = adaptive_pixelize(crop, {4}, 2.3, params);
  CHECK(px == t::naive_pixelize(crop, 9, 9));

  AdaptiveParams mx;
  mx.ismax = true;
  const Frame sil = adaptive_pixelize(crop, {4}, 1.0, mx);
  const Rgb mean = t::naive_mean_color(crop);
  for (int y = 0; y < 30; ++y) {
    for (int x = 0; x < 40; ++x) CHECK(sil.at(x, y) == mean);
  }
}

TEST_CASE("scale consistency and z_ref") {
  std::mt19937_64 rng(14);
  const Frame f = t::random_frame(rng, 80, 60);
  const BinaryMask m = t::ellipse_mask(80, 60, {10, 5, 30, 50});
  const double r1 = adaptive_scaler(f, m, 1.0);
  const double r2 = adaptive_scaler(upscale(f, 2), upscale(m, 2), 1.0);
  CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));

  AdaptiveParams p1, p2;
  p1.z_ref = Resolution{80, 60};
  p2.z_ref = Resolution{80, 60};
  CHECK(p1.effective_alpha_r(80, 60) == doctest::Approx(1.0));
  CHECK(p2.effective_alpha_r(160, 120) == doctest::Approx(4.0));
  const double ra = adaptive_scaler(f, m, p1.effective_alpha_r(80, 60));
  const double rb = adaptive_scaler(upscale(f, 2), upscale(m, 2), p2.effective_alpha_r(160, 120));
  const BlurBase base{13, 13, 10.0};
  const BlurPlan ka = plan_blur(30, 50, base, ra, p1);
  const BlurPlan kb = plan_blur(60, 100, base, rb, p2);
  CHECK(kb.k_h > ka.k_h);
}

TEST_CASE("anonymize_instances identities") {
  std::mt19937_64 rng(15);
  const Frame f = t::random_frame(rng, 32, 24);
  const std::vector<InstanceMask> none;
  for (auto k : {MethodKind::kRaw, MethodKind::kBlackened, MethodKind::kBlurredAdaptive,
                 MethodKind::kPixelizedAdaptive}) {
    CHECK(anonymize_instances(f, none, spec_of(k)).frame == f);
    InstanceMask empty{BinaryMask(32, 24), BBox{}, 0, 1.0};
    InstanceMask empty_in_box{BinaryMask(32, 24), BBox{2, 2, 5, 5}, 0, 1.0};
    const std::vector<InstanceMask> blanks{empty, empty_in_box};
    const AnonymizeResult res = anonymize_instances(f, blanks, spec_of(k));
    CHECK(res.frame == f);
    CHECK(res.processed == 0);
  }
  const std::vector<InstanceMask> full{make_instance(BinaryMask(32, 24, true))};
  CHECK(anonymize_instances(f, full, spec_of(MethodKind::kBlackened)).frame ==
        Frame(32, 24, Rgb{0, 0, 0}));
  CHECK(anonymize_instances(f, full, spec_of(MethodKind::kRaw)).frame == f);
}

TEST_CASE("anonymize_instances contract checks") {
  const Frame f(10, 10);
  const std::vector<InstanceMask> wrong{make_instance(BinaryMask(9, 10, true))};
  CHECK(t::error_of([&] { anonymize_instances(f, wrong, spec_of(MethodKind::kBlackened)); }) ==
        ErrorCode::kContractViolation);
  const std::vector<InstanceMask> outside{{BinaryMask(10, 10, true), BBox{5, 5, 6, 2}, 0, 1.0}};
  CHECK(t::error_of([&] { anonymize_instances(f, outside, spec_of(MethodKind::kBlackened)); }) ==
        ErrorCode::kContractViolation);
  AnonymizerSpec bad = spec_of(MethodKind::kBlurred);
  bad.blur.k_h = 4;
  const std::vector<InstanceMask> ok{make_instance(BinaryMask(10, 10, true))};
  CHECK(t::error_of([&] { anonymize_instances(f, ok, bad); }) == ErrorCode::kInvalidArgument);
  AnonymizerSpec bad_b = spec_of(MethodKind::kPixelizedAdaptive);
  bad_b.adaptive.alpha_b = 0.0;
  CHECK(t::error_of([&] { anonymize_instances(f, ok, bad_b); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("two disjoint instances with adaptive pixelization") {
  std::mt19937_64 rng(16);
  const Frame f = t::random_frame(rng, 96, 64);
  const BinaryMask a = t::ellipse_mask(96, 64, {4, 4, 20, 40});
  const BinaryMask b = t::ellipse_mask(96, 64, {50, 10, 40, 50});
  const std::vector<InstanceMask> inst{make_instance(a), make_instance(b)};
  AnonymizerSpec spec = spec_of(MethodKind::kPixelizedAdaptive);
  const AnonymizeResult res = anonymize_instances(f, inst, spec);
  REQUIRE(res.r_values.size() == 2);

  Frame expected = f;
  for (const auto& i : inst) {
    const double r = adaptive_scaler(f, i.mask, 1.0);
    const Frame patch = adaptive_pixelize(crop(expected, i.box), spec.pixelize, r, spec.adaptive);
    Frame full = expected;
    full = paste(full, i.box, patch);
    expected = t::naive_select(expected, i.mask, full);
  }
  CHECK(res.frame == expected);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 96; ++x) {
      if (!a.at(x, y) && !b.at(x, y)) CHECK(res.frame.at(x, y) == f.at(x, y));
    }
  }
}

TEST_CASE("overlapping instances mutate sequentially") {
  std::mt19937_64 rng(17);
  const Frame f = t::random_frame(rng, 40, 40);
  const InstanceMask a = make_instance(box_mask(40, 40, {0, 0, 24, 24}));
  const InstanceMask b = make_instance(box_mask(40, 40, {10, 10, 24, 24}));
  const AnonymizerSpec spec = spec_of(MethodKind::kPixelized);
  const std::vector<InstanceMask> ab{a, b}, ba{b, a};
  const Frame out_ab = anonymize_instances(f, ab, spec).frame;
  const Frame out_ba = anonymize_instances(f, ba, spec).frame;
  CHECK_FALSE(out_ab == out_ba);

  const Frame step1 = compose_masked(f, a.mask, paste(f, a.box, filters::pixelize(crop(f, a.box), 4, 4)));
  const Frame step2 = compose_masked(step1, b.mask,
                                     paste(step1, b.box, filters::pixelize(crop(step1, b.box), 4, 4)));
  CHECK(out_ab == step2);
}

TEST_CASE("stage timing and r bookkeeping") {
  std::mt19937_64 rng(18);
  const Frame f = t::random_frame(rng, 64, 48);
  std::vector<InstanceMask> inst;
  for (int i = 0; i < 3; ++i) inst.push_back(make_instance(t::ellipse_mask(64, 48, t::random_box(rng, 64, 48, 4))));
  for (auto k : {MethodKind::kBlurredAdaptive, MethodKind::kPixelizedAdaptive}) {
    const AnonymizeResult res = anonymize_instances(f, inst, spec_of(k), true);
    CHECK(res.r_values.size() == res.processed);
    CHECK(res.times.transform_us >= 0.0);
    CHECK(res.times.compose_us >= 0.0);
    for (double r : res.r_values) CHECK(r >= 1.0);
  }
  CHECK(anonymize_instances(f, inst, spec_of(MethodKind::kBlurred)).r_values.empty());
}
