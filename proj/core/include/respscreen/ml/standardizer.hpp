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

#include <span>
#include <vector>

#include "respscreen/ml/matrix.hpp"

namespace respscreen::ml {

/// Per-dimension z-scoring with training-set mean and population standard
/// deviation. Constant dimensions keep scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  bool operator==(const Standardizer&) const = default;

  std::vector<double> apply(std::span<const double> x) const;
  Matrix apply(const Matrix& x) const;
};

Standardizer fit_standardizer(const Matrix& train);

}  // namespace respscreen::ml
