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
#include <string>
#include <vector>

#include "respscreen/features.hpp"
#include "respscreen/ml/cross_validate.hpp"
#include "respscreen/ml/matrix.hpp"

namespace respscreen {

struct FeatureGroup {
  std::string name;
  std::vector<std::size_t> dims;
};

/// The thirteen descriptor groups plus "All energy", "All spectral" and
/// "All voicing", in the order of the published ablation table.
std::vector<FeatureGroup> ablation_groups(const FeatureLayout& layout);

/// Dimensions of [0, total) not in `dims`.
std::vector<std::size_t> complement(std::span<const std::size_t> dims, std::size_t total);

struct AblationRow {
  std::string name;
  std::size_t dims = 0;
  double auc_with = 0.0;     // trained on the group only
  double auc_without = 0.0;  // trained on everything else
};

struct AblationTable {
  double auc_all = 0.0;
  std::size_t total_dims = 0;
  std::vector<AblationRow> rows;
};

struct AblationData {
  const ml::Matrix& dev_x;
  std::span<const int> dev_labels;
  const ml::Folds& folds;
  const ml::Matrix& test_x;
  std::span<const int> test_labels;
};

/// Test AUC of a full cross-validated fit restricted to `dims`.
double masked_test_auc(const AblationData& data, std::span<const std::size_t> dims,
                       ml::ModelFamily family, const ml::TrainOptions& options);

/// For each group: retrain with cross-validated hyperparameters on the group
/// alone and on its complement. An empty complement reports the full-feature
/// AUC.
AblationTable ablation(const AblationData& data, std::span<const FeatureGroup> groups,
                       ml::ModelFamily family, const ml::TrainOptions& options = {});

std::string ablation_to_csv(const AblationTable& table, std::string_view comment = {});

}  // namespace respscreen
