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

#include "respscreen/ablation.hpp"

#include <array>
#include <sstream>

#include "respscreen/error.hpp"
#include "respscreen/eval.hpp"
#include "respscreen/text.hpp"

namespace respscreen {

std::vector<FeatureGroup> ablation_groups(const FeatureLayout& layout) {
  std::vector<FeatureGroup> out;
  const std::array<std::pair<LldFamily, const char*>, 3> families = {{
      {LldFamily::kEnergy, "All energy features"},
      {LldFamily::kSpectral, "All spectral features"},
      {LldFamily::kVoicing, "All voicing features"},
  }};
  for (const auto& [family, family_label] : families) {
    std::vector<LldGroup> members;
    for (std::size_t g = 0; g < kLldGroupCount; ++g) {
      const auto group = static_cast<LldGroup>(g);
      if (lld_family(group) != family) continue;
      members.push_back(group);
      const LldGroup one[] = {group};
      out.push_back({std::string(lld_group_name(group)), layout.mask(one)});
    }
    out.push_back({family_label, layout.mask(members)});
  }
  return out;
}

std::vector<std::size_t> complement(std::span<const std::size_t> dims, std::size_t total) {
  std::vector<bool> in(total, false);
  for (std::size_t d : dims) {
    require(d < total, ErrorKind::kData, "feature index out of range");
    in[d] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < total; ++i) {
    if (!in[i]) out.push_back(i);
  }
  return out;
}

double masked_test_auc(const AblationData& data, std::span<const std::size_t> dims,
                       ml::ModelFamily family, const ml::TrainOptions& options) {
  require(!dims.empty(), ErrorKind::kConfig, "ablation mask is empty");
  const auto dev = ml::select_cols(data.dev_x, dims);
  const auto test = ml::select_cols(data.test_x, dims);
  const auto grid = ml::default_grid(family, dev);
  const auto cv = ml::cross_validate(dev, data.dev_labels, data.folds, family, grid, options);
  const auto scores = cv.final_model.score(test);
  return eval::auc(eval::roc_curve(scores, data.test_labels));
}

AblationTable ablation(const AblationData& data, std::span<const FeatureGroup> groups,
                       ml::ModelFamily family, const ml::TrainOptions& options) {
  require(data.dev_x.cols == data.test_x.cols, ErrorKind::kData,
          "development and test features have different widths");
  AblationTable table;
  std::vector<std::size_t> all(data.dev_x.cols);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  table.total_dims = all.size();
  table.auc_all = masked_test_auc(data, all, family, options);
  for (const auto& g : groups) {
    require(!g.dims.empty(), ErrorKind::kConfig, "ablation group '" + g.name + "' is empty");
    AblationRow row;
    row.name = g.name;
    row.dims = g.dims.size();
    const auto rest = complement(g.dims, data.dev_x.cols);
    row.auc_with = rest.empty() ? table.auc_all : masked_test_auc(data, g.dims, family, options);
    row.auc_without = rest.empty() ? table.auc_all : masked_test_auc(data, rest, family, options);
    table.rows.push_back(row);
  }
  return table;
}

std::string ablation_to_csv(const AblationTable& table, std::string_view comment) {
  std::string out;
  if (!comment.empty()) {
    std::istringstream lines{std::string(comment)};
    for (std::string line; std::getline(lines, line);) out += "# " + line + "\n";
  }
  out += "group,dims,auc_fset,auc_all_minus_fset\n";
  out += "All," + std::to_string(table.total_dims) + "," +
         format_double(table.auc_all) + "," + format_double(table.auc_all) + "\n";
  for (const auto& r : table.rows) {
    out += csv_field(r.name) + "," + std::to_string(r.dims) + "," + format_double(r.auc_with) + "," +
           format_double(r.auc_without) + "\n";
  }
  return out;
}

}  // namespace respscreen
