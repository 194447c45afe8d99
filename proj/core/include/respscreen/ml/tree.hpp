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

namespace respscreen::ml {

/// Binary-feature classification tree. A node either tests one feature
/// (child0 for value 0, child1 for value 1) or is a leaf holding the
/// class-weighted COVID posterior of the training samples that reached it.
struct TreeNode {
  int feature = -1;  // -1 for leaves
  int child0 = -1;
  int child1 = -1;
  double probability = 0.0;
  double weight = 0.0;          // class-weighted sample mass
  std::size_t samples = 0;      // unweighted count

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::size_t feature_count = 0;
  std::size_t min_samples_leaf = 1;

  bool operator==(const TreeModel&) const = default;

  /// Index of the leaf reached by `x` (feature value > 0.5 counts as 1).
  std::size_t leaf_for(std::span<const double> x) const;
  double score(std::span<const double> x) const;
};

/// Weighted Gini impurity 1 - p^2 - (1-p)^2 of a node.
double gini(double positive_weight, double negative_weight);

/// Greedy recursive splitting on the feature that minimizes the weighted
/// child impurity. Candidates are features not yet tested on the path and
/// whose children both keep >= min_samples_leaf samples. A node becomes a
/// leaf when it is pure or no candidate lowers impurity. Ties go to the
/// lowest feature index.
TreeModel train_tree(const Matrix& features, std::span<const int> labels,
                     std::size_t min_samples_leaf, bool balanced = true);

}  // namespace respscreen::ml
