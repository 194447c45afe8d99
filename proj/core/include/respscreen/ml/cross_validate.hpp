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
#include <span>
#include <vector>

#include "respscreen/ml/matrix.hpp"
#include "respscreen/ml/model.hpp"

namespace respscreen::ml {

using Folds = std::vector<std::vector<std::size_t>>;  // row indices per fold

/// Seven log-spaced lambdas 1e-4 ... 1e2.
std::vector<double> lambda_grid();
/// d * 4^k, k = -2..2, d = median pairwise squared distance.
std::vector<double> gamma_grid(double median_sq_distance);
std::vector<std::size_t> min_samples_leaf_grid();

/// Family default grid. For RBF, d is measured on the standardized `x`.
std::vector<Hyperparameters> default_grid(ModelFamily family, const Matrix& x);

struct FoldScores {
  std::vector<std::size_t> rows;
  std::vector<double> scores;
  std::vector<int> labels;
  double auc = 0.0;
};

struct GridResult {
  Hyperparameters hyperparameters;
  std::vector<double> fold_auc;
  double mean_auc = 0.0;
};

struct CvResult {
  std::vector<GridResult> grid;
  std::size_t best = 0;
  std::vector<FoldScores> best_folds;
  TrainedModel final_model;
};

/// Rotating k-fold selection by mean validation AUC, then a refit of the
/// winner on all rows. Ties (within 1e-12) prefer the simpler model: larger
/// lambda, larger min_samples_leaf, then larger gamma.
CvResult cross_validate(const Matrix& x, std::span<const int> labels, const Folds& folds,
                        ModelFamily family, std::span<const Hyperparameters> grid,
                        const TrainOptions& options = {});

/// True when `a` is preferred over `b` at equal mean AUC.
bool simpler(const Hyperparameters& a, const Hyperparameters& b, ModelFamily family);

}  // namespace respscreen::ml
