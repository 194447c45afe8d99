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

#include "respscreen/ml/cross_validate.hpp"

#include <algorithm>
#include <cmath>

#include "respscreen/error.hpp"
#include "respscreen/eval.hpp"

namespace respscreen::ml {

std::vector<double> lambda_grid() { return {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2}; }

std::vector<double> gamma_grid(double d) {
  if (!(d > 0) || !std::isfinite(d)) d = 1.0;
  return {d / 16.0, d / 4.0, d, d * 4.0, d * 16.0};
}

std::vector<std::size_t> min_samples_leaf_grid() { return {1, 2, 5, 10, 20}; }

std::vector<Hyperparameters> default_grid(ModelFamily family, const Matrix& x) {
  std::vector<Hyperparameters> grid;
  switch (family) {
    case ModelFamily::kLogistic:
    case ModelFamily::kLinearSvm:
      for (double l : lambda_grid()) grid.push_back({l, 1.0, 1});
      break;
    case ModelFamily::kRbfSvm: {
      const auto z = fit_standardizer(x).apply(x);
      for (double l : lambda_grid()) {
        for (double g : gamma_grid(median_pairwise_sq_distance(z))) grid.push_back({l, g, 1});
      }
      break;
    }
    case ModelFamily::kTree:
      for (std::size_t m : min_samples_leaf_grid()) grid.push_back({1.0, 1.0, m});
      break;
  }
  return grid;
}

bool simpler(const Hyperparameters& a, const Hyperparameters& b, ModelFamily family) {
  if (family != ModelFamily::kTree && a.lambda != b.lambda) return a.lambda > b.lambda;
  if (family == ModelFamily::kTree && a.min_samples_leaf != b.min_samples_leaf) {
    return a.min_samples_leaf > b.min_samples_leaf;
  }
  if (family == ModelFamily::kRbfSvm && a.gamma != b.gamma) return a.gamma > b.gamma;
  return false;
}

CvResult cross_validate(const Matrix& x, std::span<const int> labels, const Folds& folds,
                        ModelFamily family, std::span<const Hyperparameters> grid,
                        const TrainOptions& options) {
  require(!grid.empty(), ErrorKind::kConfig, "cross-validation grid is empty");
  require(folds.size() >= 2, ErrorKind::kConfig, "cross-validation needs at least two folds");
  require(labels.size() == x.rows, ErrorKind::kData, "rows and labels differ in length");
  const bool kernel_family = family == ModelFamily::kLinearSvm || family == ModelFamily::kRbfSvm;

  CvResult result;
  result.grid.resize(grid.size());
  std::vector<std::vector<FoldScores>> fold_scores(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) result.grid[g].hyperparameters = grid[g];

  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train;
    for (std::size_t h = 0; h < folds.size(); ++h) {
      if (h != f) train.insert(train.end(), folds[h].begin(), folds[h].end());
    }
    std::sort(train.begin(), train.end());
    const auto& val = folds[f];
    std::vector<int> train_y, val_y;
    for (std::size_t i : train) train_y.push_back(labels[i]);
    for (std::size_t i : val) val_y.push_back(labels[i]);
    const auto pos = std::count(val_y.begin(), val_y.end(), 1);
    require(pos > 0 && pos < static_cast<long>(val_y.size()), ErrorKind::kData,
            "fold " + std::to_string(f) + " has a single class");
    if (family != ModelFamily::kTree) check_binary_labels(train_y);

    const Matrix xt = select_rows(x, train);
    const Matrix xv = select_rows(x, val);
    Matrix gram;
    if (kernel_family) gram = gram_matrix(fit_standardizer(xt).apply(xt));

    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto model =
          fit_model(family, xt, train_y, grid[g], options, kernel_family ? &gram : nullptr);
      FoldScores fs;
      fs.rows = val;
      fs.labels = val_y;
      fs.scores = model.score(xv);
      fs.auc = eval::auc(eval::roc_curve(fs.scores, fs.labels));
      result.grid[g].fold_auc.push_back(fs.auc);
      fold_scores[g].push_back(std::move(fs));
    }
  }

  for (std::size_t g = 0; g < grid.size(); ++g) {
    auto& r = result.grid[g];
    double sum = 0.0;
    for (double a : r.fold_auc) sum += a;
    r.mean_auc = sum / static_cast<double>(r.fold_auc.size());
    const auto& b = result.grid[result.best];
    if (g > 0 && (r.mean_auc > b.mean_auc + 1e-12 ||
                  (std::abs(r.mean_auc - b.mean_auc) <= 1e-12 &&
                   simpler(r.hyperparameters, b.hyperparameters, family)))) {
      result.best = g;
    }
  }
  result.best_folds = std::move(fold_scores[result.best]);

  Matrix gram;
  if (kernel_family) gram = gram_matrix(fit_standardizer(x).apply(x));
  result.final_model = fit_model(family, x, labels, grid[result.best], options,
                                 kernel_family ? &gram : nullptr);
  return result;
}

}  // namespace respscreen::ml
