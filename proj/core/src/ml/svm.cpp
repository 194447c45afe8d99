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

#include "respscreen/ml/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "respscreen/error.hpp"

namespace respscreen::ml {

namespace {

constexpr double kTau = 1e-12;

std::vector<int> to_signed(std::span<const int> labels01) {
  std::vector<int> y(labels01.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = labels01[i] == 1 ? 1 : -1;
  return y;
}

Matrix rbf_from_gram(const Matrix& g, double gamma) {
  Matrix k(g.rows, g.cols);
  for (std::size_t i = 0; i < g.rows; ++i) {
    for (std::size_t j = 0; j < g.cols; ++j) {
      const double d2 = std::max(0.0, g(i, i) + g(j, j) - 2.0 * g(i, j));
      k(i, j) = std::exp(-d2 / gamma);
    }
  }
  return k;
}

Matrix rbf_matrix(const Matrix& x, double gamma) {
  Matrix k(x.rows, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double v = rbf_kernel(x.row(i), x.row(j), gamma);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

// Margins sum_j coef_j K(j, i) + b for the rows of `kernel` indexed by `eval`,
// using training rows `train` with solution `sol`.
struct FittedDual {
  std::vector<double> coef;  // alpha * y, aligned with train rows
  double bias;
};

FittedDual fit_dual(const Matrix& kernel, std::span<const std::size_t> train,
                    std::span<const int> labels01, double lambda, bool balanced,
                    const SmoOptions& smo) {
  std::vector<int> sub(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) sub[i] = labels01[train[i]];
  check_binary_labels(sub);
  const auto upper = box_constraints(sub, class_weights(sub, balanced), lambda);
  const auto y = to_signed(sub);
  const auto k = select_block(kernel, train);
  const auto sol = solve_svm_dual(k, y, upper, smo);
  FittedDual f{std::vector<double>(train.size()), sol.bias};
  for (std::size_t i = 0; i < train.size(); ++i) f.coef[i] = sol.alpha[i] * y[i];
  return f;
}

// Platt constants from out-of-fold margins of internal refits. Falls back to
// in-sample margins when a class is too small to appear in every refit.
PlattCalibrator calibrate(const Matrix& kernel, std::span<const int> labels01, double lambda,
                          bool balanced, const SvmOptions& options,
                          std::span<const double> in_sample_margins) {
  const auto folds = calibration_folds(labels01, options.calibration_folds);
  std::vector<double> margins(labels01.size(), 0.0);
  bool ok = folds.size() >= 2;
  for (std::size_t f = 0; ok && f < folds.size(); ++f) {
    std::vector<std::size_t> train;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train.begin(), train.end());
    std::size_t pos = 0;
    for (std::size_t i : train) pos += labels01[i] == 1 ? 1 : 0;
    if (pos == 0 || pos == train.size()) {
      ok = false;
      break;
    }
    const auto dual = fit_dual(kernel, train, labels01, lambda, balanced, options.smo);
    for (std::size_t i : folds[f]) {
      double m = dual.bias;
      for (std::size_t t = 0; t < train.size(); ++t) m += dual.coef[t] * kernel(train[t], i);
      margins[i] = m;
    }
  }
  if (!ok) return fit_platt(in_sample_margins, labels01);
  return fit_platt(margins, labels01);
}

}  // namespace

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  return std::exp(-squared_distance(a, b) / gamma);
}

double hinge_loss(int c, double margin) { return std::max(0.0, 1.0 - c * margin); }

std::vector<double> box_constraints(std::span<const int> labels01, const ClassWeights& w,
                                    double lambda) {
  require(lambda > 0 && std::isfinite(lambda), ErrorKind::kConfig,
          "SVM lambda must be positive");
  std::vector<double> c(labels01.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = (labels01[i] == 1 ? w.positive : w.negative) / (2.0 * lambda);
  }
  return c;
}

DualSolution solve_svm_dual(const Matrix& kernel, std::span<const int> y,
                            std::span<const double> upper, const SmoOptions& options) {
  const std::size_t n = y.size();
  require(kernel.rows == n && kernel.cols == n && upper.size() == n, ErrorKind::kData,
          "SMO: kernel, labels and bounds differ in size");
  DualSolution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double> G(n, -1.0);
  auto& alpha = sol.alpha;
  auto at_upper = [&](std::size_t t) { return alpha[t] >= upper[t]; };
  auto at_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };
  auto Q = [&](std::size_t a, std::size_t b) {
    return static_cast<double>(y[a] * y[b]) * kernel(a, b);
  };
  const std::size_t max_iter =
      options.max_iterations > 0 ? options.max_iterations : 100 * n + 10000;

  std::size_t it = 0;
  for (; it < max_iter; ++it) {
    // First index: maximal violation among the "up" set.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] == 1 ? !at_upper(t) : !at_lower(t)) {
        const double v = -y[t] * G[t];
        if (v >= gmax) {
          gmax = v;
          i = t;
        }
      }
    }
    // Second index: largest second-order objective decrease.
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] == 1 ? at_lower(t) : at_upper(t)) continue;
      const double v = y[t] * G[t];
      gmax2 = std::max(gmax2, v);
      if (i == n) continue;
      const double grad_diff = gmax + v;
      if (grad_diff > 0) {
        double quad = kernel(i, i) + kernel(t, t) - 2.0 * kernel(i, t);
        if (quad <= 0) quad = kTau;
        const double obj = -(grad_diff * grad_diff) / quad;
        if (obj <= best) {
          best = obj;
          j = t;
        }
      }
    }
    if (gmax + gmax2 < options.tolerance || i == n || j == n) {
      sol.converged = true;
      break;
    }

    const double Ci = upper[i], Cj = upper[j];
    const double ai = alpha[i], aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = kernel(i, i) + kernel(j, j) + 2.0 * Q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
      }
      if (diff > Ci - Cj) {
        if (alpha[i] > Ci) { alpha[i] = Ci; alpha[j] = Ci - diff; }
      } else {
        if (alpha[j] > Cj) { alpha[j] = Cj; alpha[i] = Cj + diff; }
      }
    } else {
      double quad = kernel(i, i) + kernel(j, j) - 2.0 * Q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > Ci) {
        if (alpha[i] > Ci) { alpha[i] = Ci; alpha[j] = sum - Ci; }
      } else {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
      }
      if (sum > Cj) {
        if (alpha[j] > Cj) { alpha[j] = Cj; alpha[i] = sum - Cj; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
      }
    }
    const double dai = alpha[i] - ai, daj = alpha[j] - aj;
    for (std::size_t t = 0; t < n; ++t) G[t] += Q(i, t) * dai + Q(j, t) * daj;
  }
  sol.iterations = it;

  // Bias from free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * G[t];
    if (at_upper(t)) {
      if (y[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (at_lower(t)) {
      if (y[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free;
      sum_free += yg;
    }
  }
  const double rho = free > 0 ? sum_free / static_cast<double>(free) : 0.5 * (ub + lb);
  sol.bias = -rho;
  return sol;
}

std::vector<std::vector<std::size_t>> calibration_folds(std::span<const int> labels,
                                                        std::size_t k) {
  require(k >= 2, ErrorKind::kConfig, "calibration needs at least two folds");
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (int cls : {0, 1}) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) folds[next++ % k].push_back(i);
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  std::erase_if(folds, [](const auto& f) { return f.empty(); });
  return folds;
}

double median_pairwise_sq_distance(const Matrix& x) {
  require(x.rows >= 2, ErrorKind::kData, "median distance needs two rows");
  constexpr std::size_t kMaxRows = 2000;
  std::vector<std::size_t> rows;
  if (x.rows <= kMaxRows) {
    for (std::size_t i = 0; i < x.rows; ++i) rows.push_back(i);
  } else {
    for (std::size_t i = 0; i < kMaxRows; ++i) rows.push_back(i * x.rows / kMaxRows);
  }
  std::vector<double> d;
  d.reserve(rows.size() * (rows.size() - 1) / 2);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) d.push_back(squared_distance(x.row(rows[a]), x.row(rows[b])));
  }
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<long>(mid), d.end());
  double med = d[mid];
  if (d.size() % 2 == 0) {
    med = 0.5 * (med + *std::max_element(d.begin(), d.begin() + static_cast<long>(mid)));
  }
  return med;
}

// -------------------------------------------------------------------- models

double KernelModel::decision(std::span<const double> x) const {
  require(x.size() == support_vectors.cols, ErrorKind::kData,
          "model expects " + std::to_string(support_vectors.cols) + " dims, got " +
              std::to_string(x.size()));
  double m = bias;
  for (std::size_t i = 0; i < support_vectors.rows; ++i) {
    m += coef[i] * rbf_kernel(support_vectors.row(i), x, gamma);
  }
  return m;
}

double KernelModel::score(std::span<const double> x) const {
  return platt.value_or(PlattCalibrator{})(decision(x));
}

LinearModel train_linear_svm(const Matrix& x, std::span<const int> labels, double lambda,
                             bool balanced, const SvmOptions& options, const Matrix* gram) {
  require(labels.size() == x.rows, ErrorKind::kData, "SVM: rows and labels differ");
  check_binary_labels(labels);
  Matrix own;
  if (gram == nullptr) {
    own = gram_matrix(x);
    gram = &own;
  }
  require(gram->rows == x.rows && gram->cols == x.rows, ErrorKind::kData,
          "SVM: Gram matrix does not match the training rows");
  std::vector<std::size_t> all(x.rows);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto dual = fit_dual(*gram, all, labels, lambda, balanced, options.smo);

  LinearModel m;
  m.kind = LinearKind::kLinearSvm;
  m.lambda = lambda;
  m.bias = dual.bias;
  m.weights.assign(x.cols, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    if (dual.coef[i] == 0.0) continue;
    const auto xi = x.row(i);
    for (std::size_t j = 0; j < x.cols; ++j) m.weights[j] += dual.coef[i] * xi[j];
  }
  if (options.calibrate) {
    std::vector<double> margins(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) margins[i] = m.margin(x.row(i));
    m.platt = calibrate(*gram, labels, lambda, balanced, options, margins);
  }
  return m;
}

KernelModel train_rbf_svm(const Matrix& x, std::span<const int> labels, double lambda,
                          double gamma, bool balanced, const SvmOptions& options,
                          const Matrix* gram) {
  require(labels.size() == x.rows, ErrorKind::kData, "SVM: rows and labels differ");
  require(gamma > 0 && std::isfinite(gamma), ErrorKind::kConfig, "RBF gamma must be positive");
  check_binary_labels(labels);
  if (gram != nullptr) {
    require(gram->rows == x.rows && gram->cols == x.rows, ErrorKind::kData,
            "SVM: Gram matrix does not match the training rows");
  }
  const Matrix kernel = gram != nullptr ? rbf_from_gram(*gram, gamma) : rbf_matrix(x, gamma);
  std::vector<std::size_t> all(x.rows);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto dual = fit_dual(kernel, all, labels, lambda, balanced, options.smo);

  KernelModel m;
  m.gamma = gamma;
  m.lambda = lambda;
  m.bias = dual.bias;
  std::vector<std::size_t> sv;
  for (std::size_t i = 0; i < x.rows; ++i) {
    if (dual.coef[i] != 0.0) {
      sv.push_back(i);
      m.coef.push_back(dual.coef[i]);
    }
  }
  m.support_vectors = select_rows(x, sv);
  if (options.calibrate) {
    std::vector<double> margins(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
      double v = dual.bias;
      for (std::size_t t = 0; t < x.rows; ++t) v += dual.coef[t] * kernel(t, i);
      margins[i] = v;
    }
    m.platt = calibrate(kernel, labels, lambda, balanced, options, margins);
  }
  return m;
}

}  // namespace respscreen::ml
