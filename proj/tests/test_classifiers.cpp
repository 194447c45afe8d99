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
#include <filesystem>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "respscreen/error.hpp"
#include "respscreen/ml/cross_validate.hpp"
#include "respscreen/ml/linear.hpp"
#include "respscreen/ml/matrix.hpp"
#include "respscreen/ml/model.hpp"
#include "respscreen/ml/standardizer.hpp"
#include "respscreen/ml/svm.hpp"
#include "respscreen/ml/tree.hpp"

using namespace respscreen;
using namespace respscreen::ml;
namespace fs = std::filesystem;

namespace {

struct Data {
  Matrix x;
  std::vector<int> y;
};

// Two Gaussian blobs in `d` dimensions, centred at -/+ `sep` / 2 on axis 0.
Data blobs(std::size_t n_neg, std::size_t n_pos, std::size_t d, double sep, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Data out{Matrix(n_neg + n_pos, d), {}};
  for (std::size_t i = 0; i < n_neg + n_pos; ++i) {
    const int c = i < n_neg ? 0 : 1;
    out.y.push_back(c);
    for (std::size_t j = 0; j < d; ++j) out.x(i, j) = g(rng);
    out.x(i, 0) += (c ? 0.5 : -0.5) * sep;
  }
  return out;
}

Folds round_robin_folds(std::span<const int> y, std::size_t k) {
  Folds f(k);
  std::size_t next = 0;
  for (int cls : {0, 1}) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == cls) f[next++ % k].push_back(i);
    }
  }
  return f;
}

double objective(const Matrix& x, std::span<const int> y, std::span<const double> s, double lambda,
                 double w, double b) {
  double total = lambda * w * w;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-(w * x(i, 0) + b)));
    total -= s[i] * (y[i] ? std::log(p) : std::log(1.0 - p));
  }
  return total;
}

// Weighted positive fraction of the training rows routed to each leaf.
void check_leaf_replay(const TreeModel& t, const Matrix& x, std::span<const int> y, bool balanced) {
  auto w = class_weights(y, balanced);
  std::vector<double> pos(t.nodes.size(), 0.0), tot(t.nodes.size(), 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto leaf = t.leaf_for(x.row(i));
    double wi = y[i] ? w.positive : w.negative;
    tot[leaf] += wi;
    if (y[i]) pos[leaf] += wi;
  }
  for (std::size_t n = 0; n < t.nodes.size(); ++n) {
    if (!t.nodes[n].is_leaf() || tot[n] == 0.0) continue;
    CHECK(t.nodes[n].probability == doctest::Approx(pos[n] / tot[n]).epsilon(1e-12));
    CHECK(t.nodes[n].samples >= t.min_samples_leaf);
  }
}

}  // namespace

// ------------------------------------------------------------- standardizer

TEST_CASE("standardizer: hand cases and training-set moments") {
  auto x = Matrix::from_rows({{1.0, 5.0}, {3.0, 5.0}});
  auto s = fit_standardizer(x);
  CHECK(s.mean == std::vector<double>{2.0, 5.0});
  CHECK(s.scale == std::vector<double>{1.0, 1.0});
  auto z = s.apply(x);
  CHECK(z.data == std::vector<double>{-1.0, 0.0, 1.0, 0.0});

  auto d = blobs(40, 13, 6, 3.0, 1);
  for (std::size_t i = 0; i < d.x.rows; ++i) d.x(i, 2) = 100.0 * d.x(i, 2) + 1e4;
  auto st = fit_standardizer(d.x);
  auto zz = st.apply(d.x);
  for (std::size_t j = 0; j < zz.cols; ++j) {
    double m = 0, v = 0;
    for (std::size_t i = 0; i < zz.rows; ++i) m += zz(i, j);
    m /= static_cast<double>(zz.rows);
    for (std::size_t i = 0; i < zz.rows; ++i) v += (zz(i, j) - m) * (zz(i, j) - m);
    v /= static_cast<double>(zz.rows);
    CHECK(std::abs(m) <= 1e-8);
    CHECK(std::abs(v - 1.0) <= 1e-6);
  }
  CHECK_THROWS_AS(st.apply(std::vector<double>(5, 0.0)), Error);
  CHECK_THROWS_AS(fit_standardizer(Matrix(1, 3)), Error);
}

// ---------------------------------------------------------------- logistic

TEST_CASE("logistic: zero model scores one half") {
  LinearModel m;
  m.weights = {0.0, 0.0, 0.0};
  CHECK(m.score(std::vector<double>{1.0, -4.0, 9.0}) == 0.5);
}

TEST_CASE("logistic: class weights") {
  std::vector<int> y = {0, 0, 0, 1, 0, 0, 0, 1};
  auto w = class_weights(y, true);
  CHECK(w.positive == 3.0);
  CHECK(w.negative == 1.0);
  auto u = class_weights(y, false);
  CHECK(u.positive == 1.0);
  CHECK_THROWS_AS(check_binary_labels(std::vector<int>{1, 1, 1}), Error);
  CHECK_THROWS_AS(check_binary_labels(std::vector<int>{0, 2, 1}), Error);
}

TEST_CASE("logistic: analytic gradient matches central differences") {
  auto d = blobs(25, 9, 4, 1.0, 7);
  std::vector<double> s(d.x.rows);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = d.y[i] ? 25.0 / 9.0 : 1.0;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> lam(0.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    LogisticObjective obj(d.x, d.y, s, lam(rng));
    std::vector<double> w(4);
    for (double& v : w) v = g(rng);
    double b = g(rng);
    std::vector<double> gw(4);
    double gb = 0;
    obj.value_and_gradient(w, b, gw, gb);
    double num = 0, den = 0;
    for (std::size_t j = 0; j <= 4; ++j) {
      const double h = 1e-5;
      auto wp = w, wm = w;
      double bp = b, bm = b;
      if (j < 4) {
        wp[j] += h;
        wm[j] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      double fd = (obj.value(wp, bp) - obj.value(wm, bm)) / (2 * h);
      double an = j < 4 ? gw[j] : gb;
      num += (fd - an) * (fd - an);
      den += an * an;
    }
    CHECK(std::sqrt(num / den) <= 1e-5);
  }
}

TEST_CASE("logistic: separable 1-D pair is pushed to confident scores") {
  auto x = Matrix::from_rows({{-1.0}, {1.0}});
  std::vector<int> y = {0, 1};
  auto m = train_logistic(x, y, 1e-6);
  CHECK(m.score(std::vector<double>{1.0}) > 0.9);
  CHECK(m.score(std::vector<double>{-1.0}) < 0.1);
}

TEST_CASE("logistic: optimum agrees with a grid-search oracle") {
  auto x = Matrix::from_rows({{-2.0}, {-1.0}, {-0.5}, {0.0}, {0.3}, {0.8}, {1.5}, {2.0}});
  std::vector<int> y = {0, 0, 1, 0, 1, 0, 1, 1};
  std::vector<double> s(8, 1.0);
  const double lambda = 0.1;
  auto fit = train_logistic_detailed(x, y, s, lambda);
  CHECK(fit.converged);
  double best = 1e300, bw = 0, bb = 0;
  for (double w = -1.0; w <= 4.0; w += 0.002) {
    for (double b = -2.0; b <= 2.0; b += 0.002) {
      double f = objective(x, y, s, lambda, w, b);
      if (f < best) {
        best = f;
        bw = w;
        bb = b;
      }
    }
  }
  CHECK(std::abs(fit.model.weights[0] - bw) <= 0.004);
  CHECK(std::abs(fit.model.bias - bb) <= 0.004);
  CHECK(objective(x, y, s, lambda, fit.model.weights[0], fit.model.bias) <= best + 1e-9);
}

TEST_CASE("logistic: weighted run equals duplicated positives") {
  auto d = blobs(30, 10, 3, 1.2, 3);
  auto weighted = train_logistic(d.x, d.y, 0.05, true);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < d.x.rows; ++i) {
    int copies = d.y[i] ? 3 : 1;
    for (int c = 0; c < copies; ++c) {
      rows.emplace_back(d.x.row(i).begin(), d.x.row(i).end());
      labels.push_back(d.y[i]);
    }
  }
  auto dup = train_logistic(Matrix::from_rows(rows), labels, 0.05, false);
  for (std::size_t i = 0; i < d.x.rows; ++i) {
    CHECK(std::abs(weighted.score(d.x.row(i)) - dup.score(d.x.row(i))) <= 1e-4);
  }
}

TEST_CASE("logistic: score increases along +w and training is deterministic") {
  auto d = blobs(20, 20, 3, 2.0, 5);
  auto m = train_logistic(d.x, d.y, 0.01);
  CHECK(m == train_logistic(d.x, d.y, 0.01));
  std::vector<double> p(3, 0.0);
  double prev = m.score(p);
  for (int step = 0; step < 20; ++step) {
    for (std::size_t j = 0; j < 3; ++j) p[j] += 0.01 * m.weights[j];
    double now = m.score(p);
    CHECK(now > prev);
    prev = now;
  }
  CHECK(prev < 1.0);
  CHECK_THROWS_AS(train_logistic(d.x, std::vector<int>(40, 1), 0.01), Error);
}

// --------------------------------------------------------------------- SVM

TEST_CASE("svm: hinge loss and kernel spot values") {
  CHECK(hinge_loss(1, 1.0) == 0.0);
  CHECK(hinge_loss(1, 0.0) == 1.0);
  CHECK(hinge_loss(-1, 0.5) == 1.5);
  std::vector<double> a = {0.3, -1.2, 4.0};
  CHECK(rbf_kernel(a, a, 0.7) == 1.0);
  std::vector<double> b = {0.3 + 1.0, -1.2 + 2.0, 4.0};  // squared distance 5
  CHECK(std::abs(rbf_kernel(a, b, 5.0) - std::exp(-1.0)) <= 1e-12);
  CHECK(std::abs(rbf_kernel(a, b, 2.5) - std::exp(-2.0)) <= 1e-12);
}

TEST_CASE("svm: dual solution satisfies the KKT conditions") {
  auto d = blobs(30, 12, 2, 1.5, 11);
  const double lambda = 0.05, gamma = 2.0;
  auto w = class_weights(d.y, true);
  auto upper = box_constraints(d.y, w, lambda);
  CHECK(upper[0] == doctest::Approx(1.0 / (2 * lambda)));
  CHECK(upper[30] == doctest::Approx(2.5 / (2 * lambda)));
  Matrix k(d.x.rows, d.x.rows);
  std::vector<int> ys(d.x.rows);
  for (std::size_t i = 0; i < d.x.rows; ++i) {
    ys[i] = d.y[i] ? 1 : -1;
    for (std::size_t j = 0; j < d.x.rows; ++j) k(i, j) = rbf_kernel(d.x.row(i), d.x.row(j), gamma);
  }
  auto sol = solve_svm_dual(k, ys, upper);
  CHECK(sol.converged);
  double eq = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    CHECK(sol.alpha[i] >= 0.0);
    CHECK(sol.alpha[i] <= upper[i] + 1e-12);
    eq += sol.alpha[i] * ys[i];
  }
  CHECK(std::abs(eq) <= 1e-9);
  // y_i f(x_i) >= 1 at alpha = 0, <= 1 at the bound, == 1 in between.
  const double tol = 2e-3;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    double f = sol.bias;
    for (std::size_t j = 0; j < ys.size(); ++j) f += sol.alpha[j] * ys[j] * k(i, j);
    double yf = ys[i] * f;
    if (sol.alpha[i] <= 1e-12) {
      CHECK(yf >= 1.0 - tol);
    } else if (sol.alpha[i] >= upper[i] - 1e-12) {
      CHECK(yf <= 1.0 + tol);
    } else {
      CHECK(std::abs(yf - 1.0) <= tol);
    }
  }
}

TEST_CASE("svm: XOR needs the kernel") {
  auto x = Matrix::from_rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  std::vector<int> y = {0, 0, 1, 1};
  SvmOptions opt;
  opt.calibrate = false;
  auto rbf = train_rbf_svm(x, y, 1e-3, 1.0, true, opt);
  auto lin = train_linear_svm(x, y, 1e-3, true, opt);
  int rbf_ok = 0, lin_ok = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    rbf_ok += (rbf.decision(x.row(i)) > 0) == (y[i] == 1);
    lin_ok += (lin.margin(x.row(i)) > 0) == (y[i] == 1);
  }
  CHECK(rbf_ok == 4);
  CHECK(lin_ok <= 3);
  // By symmetry every point is a support vector with the same |coef|.
  REQUIRE(rbf.coef.size() == 4);
  for (double c : rbf.coef) {
    CHECK(std::abs(c) == doctest::Approx(std::abs(rbf.coef[0])).epsilon(1e-3));
  }
  CHECK(std::abs(rbf.bias) <= 1e-3);
}

TEST_CASE("svm: decision value equals the brute-force kernel sum") {
  auto d = blobs(25, 15, 3, 1.0, 21);
  auto m = train_rbf_svm(d.x, d.y, 0.1, 3.0);
  for (std::size_t s = 0; s < m.support_vectors.rows; ++s) {
    auto x = m.support_vectors.row(s);
    double f = m.bias;
    for (std::size_t i = 0; i < m.support_vectors.rows; ++i) {
      double dist = 0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        double diff = m.support_vectors(i, j) - x[j];
        dist += diff * diff;
      }
      f += m.coef[i] * std::exp(-dist / m.gamma);
    }
    CHECK(m.decision(x) == doctest::Approx(f).epsilon(1e-12));
  }
  auto w = class_weights(d.y, true);
  for (std::size_t i = 0; i < m.coef.size(); ++i) {
    CHECK(std::abs(m.coef[i]) <= std::max(w.positive, w.negative) / (2 * 0.1) + 1e-9);
  }
}

TEST_CASE("svm: linear separable blobs, calibrated scores monotone in margin") {
  auto d = blobs(40, 20, 2, 8.0, 4);
  auto m = train_linear_svm(d.x, d.y, 0.01);
  REQUIRE(m.platt.has_value());
  CHECK(m.platt->a < 0.0);
  std::vector<std::pair<double, double>> ms;
  for (std::size_t i = 0; i < d.x.rows; ++i) {
    CHECK((m.margin(d.x.row(i)) > 0) == (d.y[i] == 1));
    ms.emplace_back(m.margin(d.x.row(i)), m.score(d.x.row(i)));
  }
  std::sort(ms.begin(), ms.end());
  for (std::size_t i = 1; i < ms.size(); ++i) CHECK(ms[i].second >= ms[i - 1].second);
}

TEST_CASE("svm: wide RBF ranks like the linear SVM") {
  auto d = blobs(30, 30, 3, 3.0, 8);
  SvmOptions opt;
  opt.calibrate = false;
  auto lin = train_linear_svm(d.x, d.y, 1e-2, true, opt);
  auto rbf = train_rbf_svm(d.x, d.y, 1e-6, 1e3 * median_pairwise_sq_distance(d.x), true, opt);
  std::vector<double> a, b;
  for (std::size_t i = 0; i < d.x.rows; ++i) {
    a.push_back(lin.margin(d.x.row(i)));
    b.push_back(rbf.decision(d.x.row(i)));
  }
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<double>(k);
    return r;
  };
  auto ra = ranks(a), rb = ranks(b);
  double n = static_cast<double>(ra.size()), sd = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) sd += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  double spearman = 1.0 - 6.0 * sd / (n * (n * n - 1.0));
  CHECK(spearman > 0.9);
}

TEST_CASE("svm: calibration folds and errors") {
  std::vector<int> y = {0, 1, 0, 0, 1, 0, 1};
  auto f = calibration_folds(y, 3);
  REQUIRE(f.size() == 3);
  std::vector<int> seen(y.size(), 0);
  for (const auto& fold : f) {
    for (auto i : fold) ++seen[i];
  }
  for (int s : seen) CHECK(s == 1);
  auto d = blobs(5, 5, 2, 1.0, 1);
  CHECK_THROWS_AS(train_rbf_svm(d.x, d.y, 0.1, 0.0), Error);
  CHECK_THROWS_AS(train_linear_svm(d.x, d.y, 0.0), Error);
  CHECK_THROWS_AS(train_linear_svm(d.x, std::vector<int>(10, 0), 0.1), Error);
}

TEST_CASE("platt: monotone with negative slope") {
  std::vector<double> m = {-3, -2, -1.5, -1, -0.2, 0.1, 0.5, 1, 2, 3};
  std::vector<int> y = {0, 0, 0, 1, 0, 1, 0, 1, 1, 1};
  auto p = fit_platt(m, y);
  CHECK(p.a < 0.0);
  for (double v = -5; v < 5; v += 0.25) CHECK(p(v + 0.25) > p(v));
  // Symmetric data calibrates to p(0) = 1/2.
  std::vector<double> sm = {-2, -1, 1, 2};
  std::vector<int> sy = {0, 0, 1, 1};
  auto sp = fit_platt(sm, sy);
  CHECK(std::abs(sp.b) <= 1e-9);
}

// -------------------------------------------------------------------- tree

TEST_CASE("tree: Gini values") {
  CHECK(gini(1, 1) == 0.5);
  CHECK(gini(3, 0) == 0.0);
  CHECK(gini(1, 3) == doctest::Approx(0.375));
  CHECK(gini(0, 0) == 0.0);
}

TEST_CASE("tree: hand-computed split choices") {
  SUBCASE("feature A separates, feature B is noise") {
    auto x = Matrix::from_rows({{1, 0}, {1, 1}, {0, 0}, {0, 1}});
    std::vector<int> y = {1, 1, 0, 0};
    auto t = train_tree(x, y, 1, false);
    CHECK(t.nodes[0].feature == 0);
    CHECK(t.score(std::vector<double>{1, 0}) == 1.0);
    CHECK(t.score(std::vector<double>{0, 1}) == 0.0);
  }
  SUBCASE("same data with the columns swapped") {
    auto x = Matrix::from_rows({{0, 1}, {1, 1}, {0, 0}, {1, 0}});
    std::vector<int> y = {1, 1, 0, 0};
    CHECK(train_tree(x, y, 1, false).nodes[0].feature == 1);
  }
  SUBCASE("equal impurity 2/9 on both features goes to the lower index") {
    auto x = Matrix::from_rows({{1, 1}, {1, 1}, {1, 0}, {0, 0}, {0, 0}, {0, 1}});
    std::vector<int> y = {1, 1, 1, 0, 0, 1};
    CHECK(train_tree(x, y, 1, false).nodes[0].feature == 0);
  }
  SUBCASE("eight samples: impurities 0.5 / 0.2 / 0 pick feature 2") {
    auto x = Matrix::from_rows({{1, 1, 1}, {1, 1, 1}, {1, 0, 0}, {1, 0, 0},
                                {0, 1, 1}, {0, 0, 1}, {0, 0, 0}, {0, 0, 0}});
    std::vector<int> y = {1, 1, 0, 0, 1, 1, 0, 0};
    auto t = train_tree(x, y, 1, false);
    CHECK(t.nodes[0].feature == 2);
    CHECK(t.nodes.size() == 3);
  }
  SUBCASE("min_samples_leaf rules out the isolating split") {
    auto x = Matrix::from_rows({{1, 1}, {0, 1}, {0, 0}, {0, 0}, {0, 0}});
    std::vector<int> y = {1, 0, 0, 0, 0};
    CHECK(train_tree(x, y, 1, false).nodes[0].feature == 0);
    auto t2 = train_tree(x, y, 2, false);
    CHECK(t2.nodes[0].feature == 1);
    check_leaf_replay(t2, x, y, false);
  }
}

TEST_CASE("tree: balanced leaf posterior and replay property") {
  auto x = Matrix::from_rows({{1, 1}, {1, 1}, {0, 1}, {0, 0}});
  std::vector<int> y = {1, 0, 0, 0};
  auto t = train_tree(x, y, 1, true);
  CHECK(t.nodes[0].feature == 0);
  CHECK(t.score(std::vector<double>{1, 1}) == doctest::Approx(0.75));

  std::mt19937_64 rng(12);
  std::bernoulli_distribution coin(0.35);
  Matrix rx(200, 8);
  std::vector<int> ry(200);
  for (std::size_t i = 0; i < 200; ++i) {
    for (std::size_t j = 0; j < 8; ++j) rx(i, j) = coin(rng) ? 1.0 : 0.0;
    ry[i] = (rx(i, 0) + rx(i, 3) + (coin(rng) ? 1 : 0)) >= 2 ? 1 : 0;
  }
  for (bool balanced : {false, true}) {
    for (std::size_t msl : {1u, 5u, 20u}) {
      auto tr = train_tree(rx, ry, msl, balanced);
      check_leaf_replay(tr, rx, ry, balanced);
      for (const auto& n : tr.nodes) {
        CHECK(n.probability >= 0.0);
        CHECK(n.probability <= 1.0);
        if (!n.is_leaf()) CHECK(n.feature < 8);
      }
    }
  }
  auto pure = train_tree(Matrix::from_rows({{1, 0}, {0, 1}}), std::vector<int>{1, 1}, 1);
  CHECK(pure.nodes.size() == 1);
  CHECK(pure.nodes[0].probability == 1.0);
  CHECK_THROWS_AS(train_tree(Matrix(0, 8), std::vector<int>{}, 1), Error);
  CHECK_THROWS_AS(train_tree(Matrix::from_rows({{0.5}}), std::vector<int>{1}, 1), Error);
}

// ------------------------------------------------------------------- model

TEST_CASE("model: save/load is bit-exact for every family") {
  auto d = blobs(20, 10, 4, 2.0, 31);
  Matrix bits(d.x.rows, 8);
  for (std::size_t i = 0; i < d.x.rows; ++i) {
    for (std::size_t j = 0; j < 8; ++j) bits(i, j) = d.x(i, j % 4) > 0 ? 1.0 : 0.0;
  }
  auto dir = fs::temp_directory_path() / "respscreen_model_test";
  fs::create_directories(dir);
  for (auto fam : {ModelFamily::kLogistic, ModelFamily::kLinearSvm, ModelFamily::kRbfSvm,
                   ModelFamily::kTree}) {
    Hyperparameters hp;
    hp.lambda = 0.01;
    hp.gamma = 4.0;
    hp.min_samples_leaf = 2;
    const Matrix& x = fam == ModelFamily::kTree ? bits : d.x;
    auto m = fit_model(fam, x, d.y, hp);
    m.layout_id = "layout-a";
    m.training_ids = {"a", "b,c"};
    auto path = dir / (std::string(family_name(fam)) + ".model");
    save_model(m, path);
    auto back = load_model(path);
    CHECK(back == m);
    CHECK(serialize_model(back) == serialize_model(m));
    for (std::size_t i = 0; i < x.rows; ++i) CHECK(back.score(x.row(i)) == m.score(x.row(i)));
    CHECK_NOTHROW(check_layout(back, "layout-a"));
    CHECK_THROWS_AS(check_layout(back, "layout-b"), Error);
    CHECK_THROWS_AS(back.score(std::vector<double>(x.cols + 1, 0.0)), Error);
  }
  fs::remove_all(dir);
}

TEST_CASE("model: damaged files are format errors") {
  auto d = blobs(10, 10, 2, 2.0, 2);
  auto text = serialize_model(fit_model(ModelFamily::kLogistic, d.x, d.y, {}));
  auto kind = [](const std::string& t) {
    try {
      deserialize_model(t);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kCompute;
  };
  std::string magic = text;
  magic[0] = 'X';
  CHECK(kind(magic) == ErrorKind::kFormat);
  std::string version = text;
  version.replace(version.find(" 1\n"), 3, " 9\n");
  CHECK(kind(version) == ErrorKind::kFormat);
  std::string tampered = text;
  auto pos = tampered.find("\"bias\"");
  REQUIRE(pos != std::string::npos);
  tampered.insert(pos, " ");
  CHECK(kind(tampered) == ErrorKind::kFormat);
  CHECK(kind(text.substr(0, 10)) == ErrorKind::kFormat);
  CHECK(parse_family("lr") == ModelFamily::kLogistic);
  CHECK(parse_family("rbf") == ModelFamily::kRbfSvm);
  CHECK_THROWS_AS(parse_family("forest"), Error);
}

// -------------------------------------------------------- cross validation

TEST_CASE("cv: grids") {
  auto l = lambda_grid();
  REQUIRE(l.size() == 7);
  CHECK(l.front() == doctest::Approx(1e-4));
  CHECK(l.back() == doctest::Approx(1e2));
  auto g = gamma_grid(2.0);
  REQUIRE(g.size() == 5);
  CHECK(g[0] == doctest::Approx(2.0 / 16));
  CHECK(g[4] == doctest::Approx(32.0));
  CHECK(min_samples_leaf_grid() == std::vector<std::size_t>{1, 2, 5, 10, 20});
  auto d = blobs(10, 10, 3, 1.0, 1);
  CHECK(default_grid(ModelFamily::kRbfSvm, d.x).size() == 35);
  CHECK(default_grid(ModelFamily::kLogistic, d.x).size() == 7);
}

TEST_CASE("cv: single grid point is selected and refit") {
  auto d = blobs(30, 15, 3, 1.0, 6);
  auto folds = round_robin_folds(d.y, 5);
  Hyperparameters hp;
  hp.lambda = 0.3;
  std::vector<Hyperparameters> grid = {hp};
  auto r = cross_validate(d.x, d.y, folds, ModelFamily::kLogistic, grid);
  CHECK(r.best == 0);
  CHECK(r.final_model.hyperparameters == hp);
  CHECK(r.grid[0].fold_auc.size() == 5);
  CHECK(r.best_folds.size() == 5);
  CHECK(r.final_model == fit_model(ModelFamily::kLogistic, d.x, d.y, hp));
}

TEST_CASE("cv: separable data reaches AUC 1 for every family") {
  auto d = blobs(30, 15, 3, 12.0, 6);
  auto folds = round_robin_folds(d.y, 5);
  for (auto fam : {ModelFamily::kLogistic, ModelFamily::kLinearSvm, ModelFamily::kRbfSvm}) {
    auto grid = default_grid(fam, d.x);
    auto r = cross_validate(d.x, d.y, folds, fam, grid);
    CHECK(r.grid[r.best].mean_auc >= 1.0 - 2e-3);
  }
}

TEST_CASE("cv: identical folds give identical fold AUCs") {
  auto base = blobs(6, 4, 2, 1.0, 9);
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  Folds folds(5);
  for (std::size_t f = 0; f < 5; ++f) {
    for (std::size_t i = 0; i < base.x.rows; ++i) {
      folds[f].push_back(rows.size());
      rows.emplace_back(base.x.row(i).begin(), base.x.row(i).end());
      y.push_back(base.y[i]);
    }
  }
  auto x = Matrix::from_rows(rows);
  auto grid = default_grid(ModelFamily::kLogistic, x);
  auto r = cross_validate(x, y, folds, ModelFamily::kLogistic, grid);
  for (const auto& g : r.grid) {
    for (double a : g.fold_auc) CHECK(std::abs(a - g.fold_auc[0]) <= 1e-9);
  }
}

TEST_CASE("cv: ties and errors") {
  Hyperparameters a, b;
  a.lambda = 1.0;
  b.lambda = 0.1;
  CHECK(simpler(a, b, ModelFamily::kLogistic));
  CHECK_FALSE(simpler(b, a, ModelFamily::kLogistic));
  Hyperparameters t1, t2;
  t1.min_samples_leaf = 10;
  t2.min_samples_leaf = 2;
  CHECK(simpler(t1, t2, ModelFamily::kTree));
  Hyperparameters g1, g2;
  g1.gamma = 8;
  g2.gamma = 2;
  CHECK(simpler(g1, g2, ModelFamily::kRbfSvm));

  // With data carrying no signal every grid point ties; the largest lambda wins.
  Matrix x(20, 2, 1.0);
  std::vector<int> y(20);
  for (std::size_t i = 0; i < 20; ++i) y[i] = i % 2;
  auto folds = round_robin_folds(y, 5);
  auto grid = default_grid(ModelFamily::kLogistic, x);
  auto r = cross_validate(x, y, folds, ModelFamily::kLogistic, grid);
  CHECK(r.grid[r.best].hyperparameters.lambda == doctest::Approx(100.0));

  Folds bad = {{0, 2, 4}, {1, 3, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19}};
  CHECK_THROWS_AS(cross_validate(x, y, bad, ModelFamily::kLogistic, grid), Error);
  CHECK_THROWS_AS(cross_validate(x, y, folds, ModelFamily::kLogistic, {}), Error);
}
