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

#include "respscreen/ml/linear.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "respscreen/error.hpp"

namespace respscreen::ml {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double inf_norm(std::span<const double> g, double gb) {
  double m = std::abs(gb);
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

void check_binary_labels(std::span<const int> labels) {
  std::size_t pos = 0, neg = 0;
  for (int c : labels) {
    require(c == 0 || c == 1, ErrorKind::kData, "labels must be 0 or 1");
    (c == 1 ? pos : neg) += 1;
  }
  require(pos > 0 && neg > 0, ErrorKind::kData,
          "training labels contain a single class (" + std::to_string(pos) + " positive, " +
              std::to_string(neg) + " negative)");
}

ClassWeights class_weights(std::span<const int> labels, bool balanced) {
  ClassWeights w;
  if (!balanced) return w;
  const auto pos = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const auto neg = static_cast<double>(labels.size()) - pos;
  // A missing class leaves nothing to balance against.
  if (pos > 0 && neg > 0) w.positive = neg / pos;
  return w;
}

double sigmoid(double a) {
  if (a >= 0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

double PlattCalibrator::operator()(double m) const {
  // 1 / (1 + exp(f)) == sigmoid(-f)
  return sigmoid(-(a * m + b));
}

PlattCalibrator fit_platt(std::span<const double> margins, std::span<const int> labels) {
  require(margins.size() == labels.size() && !margins.empty(), ErrorKind::kData,
          "platt: margins and labels differ in length");
  check_binary_labels(labels);
  const std::size_t n = margins.size();
  double prior1 = 0, prior0 = 0;
  for (int c : labels) (c == 1 ? prior1 : prior0) += 1;
  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = labels[i] == 1 ? hi : lo;

  constexpr int kMaxIter = 100;
  constexpr double kMinStep = 1e-10, kSigma = 1e-12, kEps = 1e-5;
  double A = 0.0, B = std::log((prior0 + 1.0) / (prior1 + 1.0));

  auto objective = [&](double a, double b) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double fApB = margins[i] * a + b;
      // -(t log p + (1-t) log(1-p)) with p = 1 / (1 + exp(fApB))
      f += t[i] * fApB + softplus(-fApB);
    }
    return f;
  };
  double fval = objective(A, B);

  for (int it = 0; it < kMaxIter; ++it) {
    double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double fApB = margins[i] * A + B;
      const double p = sigmoid(-fApB);
      const double q = 1.0 - p;
      const double d2 = p * q;
      h11 += margins[i] * margins[i] * d2;
      h22 += d2;
      h21 += margins[i] * d2;
      const double d1 = t[i] - p;
      g1 += margins[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < kEps && std::abs(g2) < kEps) break;
    const double det = h11 * h22 - h21 * h21;
    const double dA = -(h22 * g1 - h21 * g2) / det;
    const double dB = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * dA + g2 * dB;
    double step = 1.0;
    while (step >= kMinStep) {
      const double na = A + step * dA, nb = B + step * dB;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        A = na;
        B = nb;
        fval = nf;
        break;
      }
      step *= 0.5;
    }
    if (step < kMinStep) break;
  }
  return {A, B};
}

double LinearModel::margin(std::span<const double> x) const {
  require(x.size() == weights.size(), ErrorKind::kData,
          "model expects " + std::to_string(weights.size()) + " dims, got " +
              std::to_string(x.size()));
  return dot(weights, x) + bias;
}

double LinearModel::score(std::span<const double> x) const {
  const double m = margin(x);
  if (kind == LinearKind::kLogistic) return sigmoid(m);
  return platt.value_or(PlattCalibrator{})(m);
}

// ------------------------------------------------------------------ logistic

LogisticObjective::LogisticObjective(const Matrix& x, std::span<const int> labels,
                                     std::span<const double> sample_weights, double lambda)
    : x_(x), labels_(labels), sample_weights_(sample_weights), lambda_(lambda) {
  require(labels.size() == x.rows && sample_weights.size() == x.rows, ErrorKind::kData,
          "logistic: rows, labels and weights differ in length");
  require(lambda >= 0 && std::isfinite(lambda), ErrorKind::kConfig, "lambda must be >= 0");
}

double LogisticObjective::value(std::span<const double> w, double b) const {
  double f = lambda_ * dot(w, w);
  for (std::size_t i = 0; i < x_.rows; ++i) {
    const double a = dot(w, x_.row(i)) + b;
    f += sample_weights_[i] * (labels_[i] == 1 ? softplus(-a) : softplus(a));
  }
  return f;
}

double LogisticObjective::value_and_gradient(std::span<const double> w, double b,
                                             std::span<double> gw, double& gb) const {
  double f = lambda_ * dot(w, w);
  for (std::size_t j = 0; j < w.size(); ++j) gw[j] = 2.0 * lambda_ * w[j];
  gb = 0.0;
  for (std::size_t i = 0; i < x_.rows; ++i) {
    const auto xi = x_.row(i);
    const double a = dot(w, xi) + b;
    const double s = sample_weights_[i];
    f += s * (labels_[i] == 1 ? softplus(-a) : softplus(a));
    const double r = s * (sigmoid(a) - labels_[i]);
    for (std::size_t j = 0; j < w.size(); ++j) gw[j] += r * xi[j];
    gb += r;
  }
  return f;
}

LogisticFit train_logistic_detailed(const Matrix& x, std::span<const int> labels,
                                    std::span<const double> sample_weights, double lambda,
                                    const LogisticOptions& opt) {
  check_binary_labels(labels);
  LogisticObjective obj(x, labels, sample_weights, lambda);
  const std::size_t d = x.cols;
  std::vector<double> w(d, 0.0), g(d), w_new(d), g_new(d);
  double b = 0.0, gb = 0.0, b_new = 0.0, gb_new = 0.0;
  double f = obj.value_and_gradient(w, b, g, gb);

  LogisticFit fit;
  double step = 1.0 / std::max(1.0, inf_norm(g, gb));
  std::size_t it = 0;
  for (; it < opt.max_iterations; ++it) {
    if (inf_norm(g, gb) <= opt.gradient_tolerance) break;
    const double gg = dot(g, g) + gb * gb;
    double f_new = 0.0;
    for (;;) {
      for (std::size_t j = 0; j < d; ++j) w_new[j] = w[j] - step * g[j];
      b_new = b - step * gb;
      f_new = obj.value(w_new, b_new);
      if (f_new <= f - opt.armijo * step * gg || step < 1e-20) break;
      step *= opt.backtrack;
    }
    f_new = obj.value_and_gradient(w_new, b_new, g_new, gb_new);

    // Barzilai-Borwein length for the next step.
    double ss = 0.0, sy = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double s = w_new[j] - w[j], y = g_new[j] - g[j];
      ss += s * s;
      sy += s * y;
    }
    {
      const double s = b_new - b, y = gb_new - gb;
      ss += s * s;
      sy += s * y;
    }
    step = sy > 0 ? std::clamp(ss / sy, 1e-12, 1e12) : std::min(step * 2.0, 1e12);

    std::swap(w, w_new);
    std::swap(g, g_new);
    b = b_new;
    gb = gb_new;
    f = f_new;
  }

  fit.iterations = it;
  fit.gradient_norm = inf_norm(g, gb);
  fit.converged = fit.gradient_norm <= opt.gradient_tolerance;
  fit.model.kind = LinearKind::kLogistic;
  fit.model.weights = std::move(w);
  fit.model.bias = b;
  fit.model.lambda = lambda;
  return fit;
}

LinearModel train_logistic(const Matrix& x, std::span<const int> labels, double lambda,
                           bool balanced, const LogisticOptions& options) {
  check_binary_labels(labels);
  const auto cw = class_weights(labels, balanced);
  std::vector<double> s(labels.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = labels[i] == 1 ? cw.positive : cw.negative;
  return train_logistic_detailed(x, labels, s, lambda, options).model;
}

}  // namespace respscreen::ml
