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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "respscreen/ml/matrix.hpp"

namespace respscreen::ml {

/// Loss weights per class. Balanced weighting scales every positive sample
/// by N_neg / N_pos and leaves negatives at 1; with a class missing, both
/// weights stay 1.
struct ClassWeights {
  double positive = 1.0;
  double negative = 1.0;
};

ClassWeights class_weights(std::span<const int> labels, bool balanced);

/// Rejects anything but {0, 1} labels with both classes present.
void check_binary_labels(std::span<const int> labels);

double sigmoid(double a);

/// Maps a margin m to 1 / (1 + exp(A m + B)).
struct PlattCalibrator {
  double a = -1.0;
  double b = 0.0;

  bool operator==(const PlattCalibrator&) const = default;
  double operator()(double margin) const;
};

/// Regularized maximum likelihood (prior-corrected targets
/// (N+ + 1)/(N+ + 2) and 1/(N- + 2)), Newton's method with backtracking.
PlattCalibrator fit_platt(std::span<const double> margins, std::span<const int> labels);

enum class LinearKind { kLogistic, kLinearSvm };

struct LinearModel {
  LinearKind kind = LinearKind::kLogistic;
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 0.0;
  std::optional<PlattCalibrator> platt;  // linear SVM only

  bool operator==(const LinearModel&) const = default;

  double margin(std::span<const double> x) const;
  /// Logistic: sigmoid(margin). Linear SVM: Platt(margin).
  double score(std::span<const double> x) const;
};

/// sum_i s_i * CE(c_i, sigmoid(w.x_i + b)) + lambda ||w||^2, bias unregularized.
class LogisticObjective {
 public:
  LogisticObjective(const Matrix& x, std::span<const int> labels,
                    std::span<const double> sample_weights, double lambda);

  std::size_t dims() const { return x_.cols; }
  double value(std::span<const double> w, double b) const;
  /// Returns the objective and fills the gradient.
  double value_and_gradient(std::span<const double> w, double b,
                            std::span<double> grad_w, double& grad_b) const;

 private:
  const Matrix& x_;
  std::span<const int> labels_;
  std::span<const double> sample_weights_;
  double lambda_;
};

struct LogisticOptions {
  double gradient_tolerance = 1e-6;  // on the infinity norm
  std::size_t max_iterations = 1000;
  double armijo = 1e-4;
  double backtrack = 0.5;
};

struct LogisticFit {
  LinearModel model;
  std::size_t iterations = 0;
  double gradient_norm = 0.0;  // infinity norm at exit
  bool converged = false;
};

/// Full-batch gradient descent. Each step starts from a Barzilai-Borwein
/// step length and backtracks until the Armijo condition holds.
LogisticFit train_logistic_detailed(const Matrix& x, std::span<const int> labels,
                                    std::span<const double> sample_weights,
                                    double lambda, const LogisticOptions& options = {});

LinearModel train_logistic(const Matrix& x, std::span<const int> labels, double lambda,
                           bool balanced = true, const LogisticOptions& options = {});

}  // namespace respscreen::ml
