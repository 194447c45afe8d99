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

#include "respscreen/ml/tree.hpp"

#include <vector>

#include "respscreen/error.hpp"
#include "respscreen/ml/linear.hpp"

namespace respscreen::ml {

double gini(double p, double n) {
  const double t = p + n;
  if (t <= 0) return 0.0;
  const double a = p / t, b = n / t;
  return 1.0 - a * a - b * b;
}

std::size_t TreeModel::leaf_for(std::span<const double> x) const {
  require(x.size() == feature_count, ErrorKind::kData,
          "tree expects " + std::to_string(feature_count) + " features, got " +
              std::to_string(x.size()));
  require(!nodes.empty(), ErrorKind::kData, "empty tree");
  std::size_t k = 0;
  while (!nodes[k].is_leaf()) {
    const auto& n = nodes[k];
    k = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] > 0.5 ? n.child1 : n.child0);
  }
  return k;
}

double TreeModel::score(std::span<const double> x) const { return nodes[leaf_for(x)].probability; }

namespace {

struct Builder {
  const Matrix& x;
  std::span<const int> labels;
  ClassWeights cw;
  std::size_t min_leaf;
  std::vector<TreeNode> nodes;

  int build(const std::vector<std::size_t>& rows, std::vector<bool>& used) {
    double wp = 0, wn = 0;
    for (std::size_t i : rows) {
      if (labels[i] == 1) wp += cw.positive;
      else wn += cw.negative;
    }
    const int id = static_cast<int>(nodes.size());
    TreeNode node;
    node.weight = wp + wn;
    node.probability = node.weight > 0 ? wp / node.weight : 0.0;
    node.samples = rows.size();
    nodes.push_back(node);
    if (wp == 0 || wn == 0) return id;

    const double parent = gini(wp, wn);
    double best = parent;
    int best_f = -1;
    for (std::size_t f = 0; f < x.cols; ++f) {
      if (used[f]) continue;
      double p0 = 0, n0 = 0, p1 = 0, n1 = 0;
      std::size_t c0 = 0, c1 = 0;
      for (std::size_t i : rows) {
        const double w = labels[i] == 1 ? cw.positive : cw.negative;
        if (x(i, f) > 0.5) {
          ++c1;
          (labels[i] == 1 ? p1 : n1) += w;
        } else {
          ++c0;
          (labels[i] == 1 ? p0 : n0) += w;
        }
      }
      if (c0 < min_leaf || c1 < min_leaf) continue;
      const double child = ((p0 + n0) * gini(p0, n0) + (p1 + n1) * gini(p1, n1)) / (wp + wn);
      if (child < best - 1e-15) {
        best = child;
        best_f = static_cast<int>(f);
      }
    }
    if (best_f < 0) return id;

    std::vector<std::size_t> r0, r1;
    for (std::size_t i : rows) (x(i, static_cast<std::size_t>(best_f)) > 0.5 ? r1 : r0).push_back(i);
    used[static_cast<std::size_t>(best_f)] = true;
    const int c0 = build(r0, used);
    const int c1 = build(r1, used);
    used[static_cast<std::size_t>(best_f)] = false;
    nodes[static_cast<std::size_t>(id)].feature = best_f;
    nodes[static_cast<std::size_t>(id)].child0 = c0;
    nodes[static_cast<std::size_t>(id)].child1 = c1;
    return id;
  }
};

}  // namespace

TreeModel train_tree(const Matrix& features, std::span<const int> labels,
                     std::size_t min_samples_leaf, bool balanced) {
  require(features.rows > 0, ErrorKind::kData, "tree: empty training set");
  require(labels.size() == features.rows, ErrorKind::kData, "tree: rows and labels differ");
  require(min_samples_leaf >= 1, ErrorKind::kConfig, "tree: min_samples_leaf must be >= 1");
  for (int c : labels) require(c == 0 || c == 1, ErrorKind::kData, "labels must be 0 or 1");
  for (double v : features.data) {
    require(v == 0.0 || v == 1.0, ErrorKind::kData, "tree features must be binary");
  }
  Builder b{features, labels, class_weights(labels, balanced), min_samples_leaf, {}};
  std::vector<std::size_t> all(features.rows);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<bool> used(features.cols, false);
  b.build(all, used);
  TreeModel m;
  m.nodes = std::move(b.nodes);
  m.feature_count = features.cols;
  m.min_samples_leaf = min_samples_leaf;
  return m;
}

}  // namespace respscreen::ml
