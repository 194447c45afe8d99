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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "respscreen/ml/linear.hpp"
#include "respscreen/ml/matrix.hpp"
#include "respscreen/ml/standardizer.hpp"
#include "respscreen/ml/svm.hpp"
#include "respscreen/ml/tree.hpp"

namespace respscreen::ml {

enum class ModelFamily { kLogistic, kLinearSvm, kRbfSvm, kTree };

std::string_view family_name(ModelFamily f);
ModelFamily parse_family(std::string_view name);

struct Hyperparameters {
  double lambda = 1.0;
  double gamma = 1.0;
  std::size_t min_samples_leaf = 1;

  bool operator==(const Hyperparameters&) const = default;
};

struct TrainOptions {
  bool balanced = true;
  LogisticOptions logistic;
  SvmOptions svm;
};

/// A trained classifier plus everything needed to score raw features.
struct TrainedModel {
  ModelFamily family = ModelFamily::kLogistic;
  Hyperparameters hyperparameters;
  std::optional<Standardizer> standardizer;  // absent for trees
  std::variant<LinearModel, KernelModel, TreeModel> model;
  std::string layout_id;
  std::vector<std::string> training_ids;
  std::map<std::string, std::string> metadata;

  bool operator==(const TrainedModel&) const = default;

  std::size_t input_dims() const;
  /// COVID probability in [0, 1] for one raw (unstandardized) input.
  double score(std::span<const double> x) const;
  std::vector<double> score(const Matrix& x) const;
};

/// Fits the standardizer on `x` (not for trees) and trains `family`.
/// `gram`, for SVM families, must be the Gram matrix of the standardized rows.
TrainedModel fit_model(ModelFamily family, const Matrix& x, std::span<const int> labels,
                       const Hyperparameters& hp, const TrainOptions& options = {},
                       const Matrix* standardized_gram = nullptr);

/// Text file: line 1 "RESPSCREEN-MODEL <version>", line 2 "checksum <fnv1a hex>",
/// then a JSON document. The checksum covers the JSON bytes.
inline constexpr int kModelFormatVersion = 1;

std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(std::string_view text);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

/// Throws a format error unless `layout_id` matches the model's.
void check_layout(const TrainedModel& model, std::string_view layout_id);

}  // namespace respscreen::ml
