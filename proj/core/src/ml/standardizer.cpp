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

#include "respscreen/ml/standardizer.hpp"

#include <algorithm>
#include <cmath>

#include "respscreen/error.hpp"

namespace respscreen::ml {

std::vector<double> Standardizer::apply(std::span<const double> x) const {
  require(x.size() == mean.size(), ErrorKind::kData,
          "standardizer expects " + std::to_string(mean.size()) + " dims, got " +
              std::to_string(x.size()));
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / scale[j];
  return out;
}

Matrix Standardizer::apply(const Matrix& x) const {
  require(x.cols == mean.size(), ErrorKind::kData,
          "standardizer expects " + std::to_string(mean.size()) + " dims, got " +
              std::to_string(x.cols));
  Matrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) out(i, j) = (x(i, j) - mean[j]) / scale[j];
  }
  return out;
}

Standardizer fit_standardizer(const Matrix& train) {
  require(train.rows >= 2, ErrorKind::kData, "standardizer needs at least two rows");
  const auto n = static_cast<double>(train.rows);
  Standardizer s;
  s.mean.assign(train.cols, 0.0);
  s.scale.assign(train.cols, 1.0);
  for (std::size_t j = 0; j < train.cols; ++j) {
    double lo = train(0, j), hi = train(0, j), sum = 0.0;
    for (std::size_t i = 0; i < train.rows; ++i) {
      lo = std::min(lo, train(i, j));
      hi = std::max(hi, train(i, j));
      sum += train(i, j);
    }
    if (lo == hi) {
      // Exact mean so the column maps to exact zeros.
      s.mean[j] = lo;
      continue;
    }
    const double mu = sum / n;
    double var = 0.0;
    for (std::size_t i = 0; i < train.rows; ++i) var += (train(i, j) - mu) * (train(i, j) - mu);
    const double sd = std::sqrt(var / n);
    s.mean[j] = mu;
    s.scale[j] = sd > 1e-12 * std::max(1.0, std::abs(mu)) ? sd : 1.0;
  }
  return s;
}

}  // namespace respscreen::ml
