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

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "respscreen/ablation.hpp"
#include "respscreen/error.hpp"
#include "respscreen/features.hpp"

using namespace respscreen;

namespace {

struct Toy {
  ml::Matrix dev_x, test_x;
  std::vector<int> dev_y, test_y;
  ml::Folds folds;
};

// Columns 0-1 carry the label, columns 2-5 are noise.
Toy toy(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto make = [&](std::size_t n, ml::Matrix& x, std::vector<int>& y) {
    x = ml::Matrix(n, 6);
    for (std::size_t i = 0; i < n; ++i) {
      int c = i % 3 == 0 ? 1 : 0;
      y.push_back(c);
      for (std::size_t j = 0; j < 6; ++j) x(i, j) = g(rng) + (j < 2 && c ? 2.5 : 0.0);
    }
  };
  Toy t;
  make(60, t.dev_x, t.dev_y);
  make(45, t.test_x, t.test_y);
  t.folds.resize(5);
  for (std::size_t i = 0; i < 60; ++i) t.folds[i % 5].push_back(i);
  return t;
}

}  // namespace

TEST_CASE("groups: published order and partition of the layout") {
  const auto& layout = feature_layout();
  auto groups = ablation_groups(layout);
  REQUIRE(groups.size() == kLldGroupCount + 3);
  CHECK(groups[0].name == "RMS Energy, Zero-Crossing Rate");
  CHECK(groups[3].name == "All energy features");
  CHECK(groups[5].name == "Mel frequency cepstral coefficients (MFCC)");
  CHECK(groups[11].name == "All spectral features");
  CHECK(groups[15].name == "All voicing features");

  std::vector<int> seen(layout.size(), 0);
  std::size_t family_total = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    bool is_family = groups[i].name.rfind("All ", 0) == 0;
    for (auto d : groups[i].dims) seen[d] += is_family ? 0 : 1;
    if (is_family) family_total += groups[i].dims.size();
  }
  for (int s : seen) CHECK(s == 1);
  CHECK(family_total == layout.size());
  CHECK(groups[3].dims.size() == groups[0].dims.size() + groups[1].dims.size() + groups[2].dims.size());
}

TEST_CASE("complement: disjoint and covering") {
  std::vector<std::size_t> dims = {0, 3, 4, 9};
  auto rest = complement(dims, 10);
  CHECK(rest == std::vector<std::size_t>{1, 2, 5, 6, 7, 8});
  std::set<std::size_t> all(dims.begin(), dims.end());
  for (auto r : rest) CHECK(all.insert(r).second);
  CHECK(all.size() == 10);
  CHECK(complement(rest, 10) == dims);
  CHECK_THROWS_AS(complement(std::vector<std::size_t>{12}, 10), Error);
}

TEST_CASE("ablation: informative group, noise group and the full mask") {
  auto t = toy(5);
  AblationData data{t.dev_x, t.dev_y, t.folds, t.test_x, t.test_y};
  std::vector<FeatureGroup> groups = {
      {"signal", {0, 1}}, {"noise", {2, 3, 4, 5}}, {"everything", {0, 1, 2, 3, 4, 5}}};
  auto table = ablation(data, groups, ml::ModelFamily::kLogistic);
  CHECK(table.total_dims == 6);
  CHECK(table.auc_all > 0.85);
  CHECK(table.rows[0].auc_with > 0.85);
  CHECK(table.rows[0].auc_without < 0.75);
  CHECK(table.rows[1].auc_with < 0.75);
  CHECK(table.rows[1].auc_without == table.rows[0].auc_with);
  CHECK(table.rows[2].auc_with == table.auc_all);
  CHECK(table.rows[2].auc_without == table.auc_all);

  auto csv = ablation_to_csv(table, "family=lr");
  CHECK(csv.rfind("# family=lr\ngroup,dims,auc_fset,auc_all_minus_fset\nAll,6,", 0) == 0);

  std::vector<FeatureGroup> empty = {{"nothing", {}}};
  CHECK_THROWS_AS(ablation(data, empty, ml::ModelFamily::kLogistic), Error);
  CHECK_THROWS_AS(masked_test_auc(data, std::vector<std::size_t>{}, ml::ModelFamily::kLogistic, {}),
                  Error);
}
