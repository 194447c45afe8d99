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

#include "common.hpp"

#include <set>
#include <sstream>

#include "respscreen/error.hpp"
#include "respscreen/eval.hpp"
#include "respscreen/ml/svm.hpp"
#include "respscreen/ml/standardizer.hpp"
#include "respscreen/text.hpp"

namespace fs = std::filesystem;

namespace respscreen::cli::detail {

void write_artifact(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  write_file(tmp.string(), text);
  fs::rename(tmp, path);
}

void write_json(const fs::path& path, const Json& j) { write_artifact(path, j.dump(2) + "\n"); }

Json provenance_json(const RunConfig& config) {
  Json j;
  j["config_hash"] = config.hash();
  j["seed"] = config.seed;
  return j;
}

std::string comment_block(std::string_view text) {
  std::string out;
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) out += "# " + line + "\n";
  return out;
}

std::vector<ParticipantRecord> load_records(const RunConfig& config) {
  require_path(config.manifest, "manifest");
  std::optional<fs::path> root;
  if (!config.audio_root.empty()) {
    require_path(config.audio_root, "audio_root");
    root = config.audio_root;
  }
  return load_manifest(config.manifest, root);
}

std::map<std::string, int> labels_by_id(const std::vector<ParticipantRecord>& records) {
  std::map<std::string, int> out;
  for (const auto& r : records) out[r.id] = is_covid(r.status) ? 1 : 0;
  return out;
}

FeatureTable symptom_table(const std::vector<ParticipantRecord>& records) {
  FeatureTable t;
  t.layout_id = std::string(kSymptomLayoutId);
  for (auto name : kSymptomNames) t.dim_names.emplace_back(name);
  for (const auto& r : records) t.rows.push_back({r.id, Modality::kBreathing, encode_symptoms(r).as_features()});
  return t;
}

FeatureTable load_modality_table(const RunConfig& config,
                                 const std::vector<ParticipantRecord>& records) {
  if (config.symptom_modality()) return symptom_table(records);
  const auto path = config.features_path(parse_modality(config.modality));
  if (!fs::exists(path)) {
    fail(ErrorKind::kConfig, "feature file not found: " + path.string() + " (run extract first)");
  }
  auto table = load_feature_table(path);
  require(table.layout_id == config.layout_id, ErrorKind::kData,
          path.string() + " uses layout " + table.layout_id + ", expected " + config.layout_id);
  return table;
}

Labeled gather(const FeatureTable& table, const std::vector<std::string>& ids,
               const std::map<std::string, int>& labels) {
  std::map<std::string_view, const FeatureRow*> rows;
  for (const auto& r : table.rows) rows.emplace(r.id, &r);
  Labeled out;
  std::vector<const FeatureRow*> picked;
  for (const auto& id : ids) {
    const auto it = rows.find(id);
    if (it == rows.end()) {
      out.missing.push_back(id);
      continue;
    }
    const auto label = labels.find(id);
    require(label != labels.end(), ErrorKind::kData, "participant " + id + " is not in the manifest");
    picked.push_back(it->second);
    out.ids.push_back(id);
    out.y.push_back(label->second);
  }
  out.x = ml::Matrix(picked.size(), table.dim_names.size());
  for (std::size_t i = 0; i < picked.size(); ++i) {
    std::copy(picked[i]->values.begin(), picked[i]->values.end(), out.x.row(i).begin());
  }
  return out;
}

ml::Folds fold_rows(const DatasetSplit& split, const Labeled& dev) {
  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < dev.ids.size(); ++i) index.emplace(dev.ids[i], i);
  ml::Folds folds;
  std::set<std::string_view> seen;
  for (const auto& fold : split.folds) {
    auto& rows = folds.emplace_back();
    for (const auto& id : fold) {
      require(seen.insert(id).second, ErrorKind::kData, "participant " + id + " is in two folds");
      const auto it = index.find(id);
      if (it != index.end()) rows.push_back(it->second);
    }
  }
  require(seen.size() >= index.size(), ErrorKind::kData,
          "split folds do not cover the development set");
  return folds;
}

std::vector<ml::Hyperparameters> grid_for(const RunConfig& config, const ml::Matrix& x) {
  const auto defaults = ml::default_grid(config.family, x);
  std::vector<double> lambdas = config.lambda_grid, gammas = config.gamma_grid;
  std::vector<std::size_t> leaves = config.leaf_grid;
  auto add_unique = [](auto& list, auto value) {
    if (std::find(list.begin(), list.end(), value) == list.end()) list.push_back(value);
  };
  for (const auto& hp : defaults) {
    if (config.lambda_grid.empty()) add_unique(lambdas, hp.lambda);
    if (config.gamma_grid.empty()) add_unique(gammas, hp.gamma);
    if (config.leaf_grid.empty()) add_unique(leaves, hp.min_samples_leaf);
  }
  std::vector<ml::Hyperparameters> grid;
  switch (config.family) {
    case ml::ModelFamily::kLogistic:
    case ml::ModelFamily::kLinearSvm:
      for (double l : lambdas) grid.push_back({l, 1.0, 1});
      break;
    case ml::ModelFamily::kRbfSvm:
      for (double l : lambdas) {
        for (double g : gammas) grid.push_back({l, g, 1});
      }
      break;
    case ml::ModelFamily::kTree:
      for (std::size_t m : leaves) grid.push_back({1.0, 1.0, m});
      break;
  }
  return grid;
}

ml::TrainOptions train_options(const RunConfig& config) {
  ml::TrainOptions o;
  o.balanced = config.balanced;
  return o;
}

Json hyperparameters_json(const ml::Hyperparameters& hp) {
  Json j;
  j["lambda"] = hp.lambda;
  j["gamma"] = hp.gamma;
  j["min_samples_leaf"] = hp.min_samples_leaf;
  return j;
}

}  // namespace respscreen::cli::detail
