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

#include "respscreen/ml/linear.hpp"
#include "respscreen/ml/matrix.hpp"

namespace respscreen::ml {

/// exp(-||a - b||^2 / gamma). gamma divides the squared distance.
double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// Class-weighted hinge loss: max(0, 1 - c (w.x + b)), c in {-1, +1}.
double hinge_loss(int c, double margin);

struct SmoOptions {
  double tolerance = 1e-3;       // maximal KKT violation at exit
  std::size_t max_iterations = 0;  // 0: 100 * n + 10000
};

struct DualSolution {
  std::vector<double> alpha;
  double bias = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Solves min_a 1/2 a^T Q a - sum a, Q_ij = y_i y_j K_ij, subject to
/// 0 <= a_i <= upper[i] and sum a_i y_i = 0, by SMO with second-order
/// working-set selection. `y` in {-1, +1}.
DualSolution solve_svm_dual(const Matrix& kernel, std::span<const int> y,
                            std::span<const double> upper, const SmoOptions& options = {});

/// Box constraints for the primal  sum_i s_i hinge_i + lambda ||w||^2:
/// dividing by 2 lambda gives C_i = s_i / (2 lambda).
std::vector<double> box_constraints(std::span<const int> labels01, const ClassWeights& w,
                                    double lambda);

struct KernelModel {
  Matrix support_vectors;
  std::vector<double> coef;  // alpha_i * y_i
  double bias = 0.0;
  double gamma = 1.0;
  double lambda = 0.0;
  std::optional<PlattCalibrator> platt;

  bool operator==(const KernelModel&) const = default;

  double decision(std::span<const double> x) const;
  double score(std::span<const double> x) const;
};

struct SvmOptions {
  SmoOptions smo;
  bool calibrate = true;
  std::size_t calibration_folds = 3;
};

/// `gram`, when given, must equal X X^T for exactly these rows; it is reused
/// for the internal calibration refits.
LinearModel train_linear_svm(const Matrix& x, std::span<const int> labels, double lambda,
                             bool balanced = true, const SvmOptions& options = {},
                             const Matrix* gram = nullptr);

KernelModel train_rbf_svm(const Matrix& x, std::span<const int> labels, double lambda,
                          double gamma, bool balanced = true, const SvmOptions& options = {},
                          const Matrix* gram = nullptr);

/// Deterministic stratified k-way partition used for the internal Platt
/// refits: each class is dealt round-robin in index order.
std::vector<std::vector<std::size_t>> calibration_folds(std::span<const int> labels,
                                                        std::size_t k);

/// Median of ||x_i - x_j||^2 over i < j (all pairs up to 2000 rows, then a
/// fixed stride subsample).
double median_pairwise_sq_distance(const Matrix& x);

}  // namespace respscreen::ml
