// Copyright (c) 2026 The respscreen Authors. All Rights Reserved.
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
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "respscreen/error.hpp"
#include "respscreen/functionals.hpp"

using namespace respscreen;
namespace fn = respscreen::functionals;

namespace {

std::vector<double> ramp(std::size_t n, double a = 1.0, double b = 0.0) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = a * static_cast<double>(i) / static_cast<double>(n - 1) + b;
  }
  return v;
}

std::vector<double> random_contour(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

void check_same_order_free(const std::vector<double>& a, const std::vector<double>& b) {
  auto pa = fn::percentiles(a), pb = fn::percentiles(b);
  CHECK(pa.q1 == doctest::Approx(pb.q1).epsilon(1e-12));
  CHECK(pa.q2 == doctest::Approx(pb.q2).epsilon(1e-12));
  CHECK(pa.q3 == doctest::Approx(pb.q3).epsilon(1e-12));
  CHECK(pa.p1 == doctest::Approx(pb.p1).epsilon(1e-12));
  CHECK(pa.range1_99 == doctest::Approx(pb.range1_99).epsilon(1e-12));
  auto ma = fn::moments(a), mb = fn::moments(b);
  CHECK(ma.mean == doctest::Approx(mb.mean).epsilon(1e-12));
  CHECK(ma.stddev == doctest::Approx(mb.stddev).epsilon(1e-12));
  CHECK(ma.skewness == doctest::Approx(mb.skewness).epsilon(1e-9));
  CHECK(ma.kurtosis == doctest::Approx(mb.kurtosis).epsilon(1e-9));
}

}  // namespace

TEST_CASE("percentiles: closed-form cases") {
  std::vector<double> c(17, 4.25);
  auto p = fn::percentiles(c);
  for (double v : {p.q1, p.q2, p.q3, p.p1, p.p99}) CHECK(v == 4.25);
  for (double v : {p.iqr12, p.iqr23, p.iqr13, p.range1_99}) CHECK(v == 0.0);

  CHECK(fn::percentiles(std::vector<double>{4, 2, 3, 1}).q2 == 2.5);
  auto four = fn::percentiles(std::vector<double>{1, 2, 3, 4});
  CHECK(four.q1 == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(four.q3 == doctest::Approx(3.25).epsilon(1e-12));
  CHECK(four.iqr13 == doctest::Approx(1.5).epsilon(1e-12));

  std::vector<double> hundred(100);
  for (std::size_t i = 0; i < 100; ++i) hundred[i] = static_cast<double>(i);
  auto h = fn::percentiles(hundred);
  CHECK(std::abs(h.p1 - 0.99) <= 1e-9);
  CHECK(std::abs(h.p99 - 98.01) <= 1e-9);
  CHECK(std::abs(h.range1_99 - 97.02) <= 1e-9);
  CHECK_THROWS_AS(fn::percentiles(std::vector<double>{}), Error);
}

TEST_CASE("temporal: definitions") {
  auto r = ramp(101);
  auto t = fn::temporal(r);
  CHECK(std::abs(t.above25 - 0.75) <= 1.0 / 101.0);
  CHECK(std::abs(t.above50 - 0.50) <= 1.0 / 101.0);
  CHECK(std::abs(t.above90 - 0.10) <= 1.0 / 101.0);
  CHECK(t.rising == 1.0);
  CHECK(t.argmin_pos == 0.0);
  CHECK(t.argmax_pos == 1.0);
  CHECK(t.range == 1.0);
  CHECK(t.nonzero == doctest::Approx(100.0 / 101.0));

  auto zero = fn::temporal(std::vector<double>(10, 0.0));
  CHECK(zero.nonzero == 0.0);
  CHECK(zero.range == 0.0);
  CHECK(zero.centroid == 0.0);
  CHECK(zero.flatness == 0.0);

  auto flat = fn::temporal(std::vector<double>(10, 2.0));
  CHECK(flat.flatness == doctest::Approx(1.0));
  CHECK(flat.centroid == doctest::Approx(0.5));

  // Two segments above 25% of range: lengths 2 and 3 of 10 samples.
  std::vector<double> seg = {0, 1, 1, 0, 0, 1, 1, 1, 0, 0};
  auto s = fn::temporal(seg);
  CHECK(s.seg_len_mean == doctest::Approx(0.25));
  CHECK(s.seg_len_max == doctest::Approx(0.3));
  CHECK(s.seg_len_min == doctest::Approx(0.2));
  CHECK(s.seg_len_std == doctest::Approx(0.05));

  auto parabola = fn::temporal(std::vector<double>{4, 1, 0, 1, 4});
  CHECK(parabola.positive_curvature == 1.0);
  auto short_c = fn::temporal(std::vector<double>{1, 2});
  CHECK(short_c.positive_curvature == 0.0);
  CHECK(short_c.rising == 1.0);
}

TEST_CASE("peaks: hand enumeration") {
  auto p = fn::peaks(std::vector<double>{0, 1, 0, 2, 0});
  CHECK(p.peak_mean == 1.5);
  CHECK(p.peak_mean_minus_mean == doctest::Approx(1.5 - 0.6));
  CHECK(p.peak_dist_mean == 2.0);
  CHECK(p.peak_dist_std == 0.0);
  CHECK(p.peak_amp_range == 1.0);
  CHECK(p.minima_amp_mean == 0.0);
  // Endpoints are not extrema, so the extrema are 1 (t=1), 0 (t=2), 2 (t=3):
  // one fall of 1 per frame and one rise of 2 per frame.
  CHECK(p.rise_slope_mean == doctest::Approx(2.0));
  CHECK(p.fall_slope_mean == doctest::Approx(1.0));
  CHECK(p.rise_slope_std == 0.0);
  auto w = fn::peaks(std::vector<double>{0, 1, 0, 3, 0, 2, 0});
  CHECK(w.fall_slope_mean == doctest::Approx((1.0 + 3.0 + 2.0) / 3.0));
  CHECK(w.rise_slope_mean == doctest::Approx((3.0 + 2.0) / 2.0));
  CHECK(w.rise_slope_std == doctest::Approx(0.5));

  auto none = fn::peaks(std::vector<double>(12, 3.0));
  CHECK(none.peak_mean == 0.0);
  CHECK(none.peak_dist_std == 0.0);
  CHECK(none.rise_slope_mean == 0.0);

  std::vector<double> sine(300);
  for (std::size_t i = 0; i < sine.size(); ++i) {
    sine[i] = std::sin(2 * std::numbers::pi * 3.0 * static_cast<double>(i) / 300.0 + 0.1);
  }
  auto sp = fn::peaks(sine);
  CHECK(sp.peak_dist_mean == doctest::Approx(100.0));
  CHECK(sp.peak_dist_std < 1e-9);

  auto plateau = fn::find_extrema(std::vector<double>{0, 2, 2, 2, 0, 1, 1, 3});
  REQUIRE(plateau.size() == 2);
  CHECK(plateau[0].is_peak);
  CHECK(plateau[0].position == 2.0);
  CHECK_FALSE(plateau[1].is_peak);
  CHECK(plateau[1].position == 4.0);
}

TEST_CASE("moments: closed-form cases") {
  auto m = fn::moments(std::vector<double>{1, 2, 3});
  CHECK(m.mean == 2.0);
  CHECK(std::abs(m.stddev - std::sqrt(2.0 / 3.0)) <= 1e-12);
  CHECK(std::abs(m.rq_mean - std::sqrt(14.0 / 3.0)) <= 1e-12);
  CHECK(std::abs(m.skewness) <= 1e-12);
  CHECK(m.kurtosis == doctest::Approx(1.5));

  auto c = fn::moments(std::vector<double>(8, -2.0));
  CHECK(c.stddev == 0.0);
  CHECK(c.skewness == 0.0);
  CHECK(c.kurtosis == 0.0);
  CHECK(c.rq_mean == 2.0);

  auto skewed = fn::moments(std::vector<double>{0, 0, 0, 1});
  CHECK(skewed.skewness == doctest::Approx(2.0 / std::sqrt(3.0)));
}

TEST_CASE("regression: exact fits") {
  auto lin = fn::regression(ramp(50, 2.0, 1.0));
  CHECK(std::abs(lin.lin_slope - 2.0) <= 1e-9);
  CHECK(std::abs(lin.lin_offset - 1.0) <= 1e-9);
  CHECK(lin.lin_error <= 1e-18);
  CHECK(std::abs(lin.quad_a) <= 1e-9);
  CHECK(std::abs(lin.quad_b - 2.0) <= 1e-9);

  std::vector<double> sq(41);
  for (std::size_t i = 0; i < sq.size(); ++i) {
    double t = static_cast<double>(i) / 40.0;
    sq[i] = t * t;
  }
  auto q = fn::regression(sq);
  CHECK(std::abs(q.quad_a - 1.0) <= 1e-9);
  CHECK(std::abs(q.quad_b) <= 1e-9);
  CHECK(std::abs(q.quad_offset) <= 1e-9);
  CHECK(q.quad_error <= 1e-18);
  CHECK(q.lin_error > 1e-3);
  // Least-squares line through t^2 on a uniform grid has slope 1 (exactly,
  // for symmetric sampling of [0, 1]).
  CHECK(std::abs(q.lin_slope - 1.0) <= 1e-9);

  auto c = fn::regression(std::vector<double>(9, 7.0));
  CHECK(std::abs(c.lin_slope) <= 1e-12);
  CHECK(std::abs(c.lin_offset - 7.0) <= 1e-12);

  auto two = fn::regression(std::vector<double>{1.0, 3.0});
  CHECK(two.lin_slope == doctest::Approx(2.0));
  CHECK(two.quad_a == 0.0);
  CHECK(two.quad_error == 0.0);
}

TEST_CASE("modulation: Levinson and LP oracles") {
  double err = 0;
  auto a = fn::levinson(std::vector<double>{1.0, 0.5, 0.25}, 2, err);
  CHECK(a[0] == doctest::Approx(0.5));
  CHECK(std::abs(a[1]) <= 1e-12);
  CHECK(err == doctest::Approx(0.75));

  auto zero = fn::modulation(std::vector<double>(50, 3.0));
  CHECK(zero.lp_gain == 0.0);
  for (double v : zero.lp) CHECK(v == 0.0);
  auto tiny = fn::modulation(std::vector<double>{1, 5, 2, 8, 3});
  CHECK(tiny.lp_gain == 0.0);

  // AR(1) with coefficient 0.9: the Yule-Walker solution is a1 = 0.9, rest 0.
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> ar(20000);
  double x = 0;
  for (double& v : ar) v = x = 0.9 * x + g(rng);
  auto m = fn::modulation(ar);
  CHECK(std::abs(m.lp[0] - 0.9) <= 0.05);
  CHECK(std::abs(m.lp[1]) <= 0.05);

  auto white = random_contour(20000, 5);
  auto w = fn::modulation(white);
  double var = fn::moments(white).stddev;
  var *= var;
  CHECK(std::abs(w.lp_gain - var) <= 0.1 * var);
}

TEST_CASE("properties: permutation, reversal and constant shift") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto v = random_contour(257, seed);
    auto perm = v;
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(seed + 100));
    check_same_order_free(v, perm);

    auto rev = std::vector<double>(v.rbegin(), v.rend());
    check_same_order_free(v, rev);
    auto tv = fn::temporal(v), tr = fn::temporal(rev);
    CHECK(tr.argmax_pos == doctest::Approx(1.0 - tv.argmax_pos));
    CHECK(tr.argmin_pos == doctest::Approx(1.0 - tv.argmin_pos));
    CHECK(tr.centroid == doctest::Approx(1.0 - tv.centroid));
    CHECK(fn::regression(rev).lin_slope == doctest::Approx(-fn::regression(v).lin_slope));

    const double k = 3.75;
    auto shifted = v;
    for (double& x : shifted) x += k;
    auto p = fn::percentiles(v), ps = fn::percentiles(shifted);
    CHECK(ps.q2 == doctest::Approx(p.q2 + k).epsilon(1e-12));
    CHECK(ps.iqr13 == doctest::Approx(p.iqr13).epsilon(1e-9));
    CHECK(ps.range1_99 == doctest::Approx(p.range1_99).epsilon(1e-9));
    auto m = fn::moments(v), ms = fn::moments(shifted);
    CHECK(ms.mean == doctest::Approx(m.mean + k).epsilon(1e-12));
    CHECK(ms.stddev == doctest::Approx(m.stddev).epsilon(1e-9));
    auto r = fn::regression(v), rs = fn::regression(shifted);
    CHECK(rs.lin_offset == doctest::Approx(r.lin_offset + k).epsilon(1e-9));
    CHECK(rs.lin_slope == doctest::Approx(r.lin_slope).epsilon(1e-9));
    auto pk = fn::peaks(v), pks = fn::peaks(shifted);
    CHECK(pks.rise_slope_std == doctest::Approx(pk.rise_slope_std).epsilon(1e-9));
    CHECK(pks.fall_slope_std == doctest::Approx(pk.fall_slope_std).epsilon(1e-9));
    CHECK(fn::modulation(shifted).lp_gain == doctest::Approx(fn::modulation(v).lp_gain).epsilon(1e-9));
  }
}

TEST_CASE("functionals are finite on degenerate input") {
  for (const auto& c : {std::vector<double>{0.0}, std::vector<double>{1.0, 1.0},
                        std::vector<double>(100, 0.0), std::vector<double>{1e149, -1e149, 1e149}}) {
    auto p = fn::percentiles(c);
    auto t = fn::temporal(c);
    auto pk = fn::peaks(c);
    auto m = fn::moments(c);
    auto r = fn::regression(c);
    auto md = fn::modulation(c);
    for (double v : {p.q2, p.range1_99, t.flatness, t.centroid, t.seg_len_std, pk.peak_dist_std,
                     m.mean, m.stddev, r.lin_slope, r.quad_error, md.lp_gain}) {
      CHECK(std::isfinite(v));
    }
  }
}
