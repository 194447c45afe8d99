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

#include <ostream>

#include "common.hpp"
#include "respscreen/ablation.hpp"
#include "respscreen/text.hpp"
#include "respscreen_cli/commands.hpp"

namespace fs = std::filesystem;

namespace respscreen::cli {

namespace {

struct Prepared {
  std::vector<ParticipantRecord> records;
  DatasetSplit split;
  FeatureTable table;
  detail::Labeled dev;
  ml::Folds folds;
};

Prepared prepare_development(const RunConfig& config, std::ostream& log) {
  Prepared p;
  p.records = detail::load_records(config);
  require_path(config.effective_split_path(), "split file");
  p.split = load_split(config.effective_split_path());
  guard_disjoint(p.split.development, p.split.test, "development features", log);
  guard_disjoint(p.split.development, p.split.recovered, "development features vs recovered", log);
  p.table = detail::load_modality_table(config, p.records);
  const auto labels = detail::labels_by_id(p.records);
  p.dev = detail::gather(p.table, p.split.development, labels);
  if (!p.dev.missing.empty()) {
    log << config.modality << ": " << p.dev.missing.size()
        << " development participant(s) have no features and are left out\n";
  }
  require(!p.dev.ids.empty(), ErrorKind::kData, "no development rows with features");
  p.folds = detail::fold_rows(p.split, p.dev);
  return p;
}

detail::Json cv_json(const RunConfig& config, const Prepared& p, const ml::CvResult& cv) {
  detail::Json j = detail::provenance_json(config);
  j["modality"] = config.modality;
  j["family"] = ml::family_name(config.family);
  j["layout_id"] = p.table.layout_id;
  std::size_t pos = 0;
  for (int y : p.dev.y) pos += static_cast<std::size_t>(y);
  j["development"] = {{"rows", p.dev.ids.size()}, {"covid", pos}, {"missing", p.dev.missing.size()}};
  detail::Json grid = detail::Json::array();
  for (const auto& g : cv.grid) {
    auto e = detail::hyperparameters_json(g.hyperparameters);
    e["fold_auc"] = g.fold_auc;
    e["mean_auc"] = g.mean_auc;
    grid.push_back(e);
  }
  j["grid"] = grid;
  j["best"] = cv.best;
  j["best_hyperparameters"] = detail::hyperparameters_json(cv.grid[cv.best].hyperparameters);
  j["best_mean_auc"] = cv.grid[cv.best].mean_auc;
  if (config.symptom_modality()) {
    const std::vector<double> none(kSymptomCount, 0.0);
    j["no_symptom_score"] = cv.final_model.score(none);
  }
  return j;
}

ml::CvResult run_cv(const RunConfig& config, const Prepared& p, std::ostream& log) {
  const auto grid = detail::grid_for(config, p.dev.x);
  log << config.modality << ": " << ml::family_name(config.family) << " on " << p.dev.ids.size()
      << " rows x " << p.dev.x.cols << " features, " << grid.size() << " grid point(s), "
      << p.folds.size() << " folds\n";
  auto cv = ml::cross_validate(p.dev.x, p.dev.y, p.folds, config.family, grid,
                               detail::train_options(config));
  log << config.modality << ": best mean fold AUC " << format_double(cv.grid[cv.best].mean_auc)
      << "\n";
  return cv;
}

}  // namespace

int cmd_cv(const RunConfig& config, std::ostream& log) {
  const auto p = prepare_development(config, log);
  const auto cv = run_cv(config, p, log);
  detail::write_json(config.out_dir / "reports" / (config.artifact_stem() + ".cv.json"),
                     cv_json(config, p, cv));
  return kExitOk;
}

int cmd_train(const RunConfig& config, std::ostream& log) {
  const auto p = prepare_development(config, log);
  auto cv = run_cv(config, p, log);
  auto& model = cv.final_model;
  model.layout_id = p.table.layout_id;
  model.training_ids = p.dev.ids;
  model.metadata["config_hash"] = config.hash();
  model.metadata["seed"] = std::to_string(config.seed);
  model.metadata["modality"] = config.modality;
  guard_disjoint(model.training_ids, p.split.test, "model training ids", log);

  const auto model_path = config.effective_model_path();
  detail::write_artifact(model_path, ml::serialize_model(model));
  detail::write_json(config.out_dir / "reports" / (config.artifact_stem() + ".cv.json"),
                     cv_json(config, p, cv));
  log << "train: wrote " << model_path.string() << "\n";
  return kExitOk;
}

int cmd_ablate(const RunConfig& config, std::ostream& log) {
  require(!config.symptom_modality(), ErrorKind::kConfig,
          "ablation runs on acoustic feature groups; choose an acoustic modality");
  const auto p = prepare_development(config, log);
  const auto labels = detail::labels_by_id(p.records);
  const auto test = detail::gather(p.table, p.split.test, labels);
  guard_disjoint(p.dev.ids, test.ids, "ablation", log);
  require(!test.ids.empty(), ErrorKind::kData, "no test rows with features");

  const AblationData data{p.dev.x, p.dev.y, p.folds, test.x, test.y};
  const auto groups = ablation_groups(feature_layout());
  log << "ablate: " << groups.size() << " groups, " << 2 * groups.size() + 1
      << " cross-validated fits\n";
  const auto table = ablation(data, groups, config.family, detail::train_options(config));
  const auto path = config.out_dir / "reports" / (config.artifact_stem() + ".ablation.csv");
  detail::write_artifact(path, ablation_to_csv(table, config.provenance()));
  log << "ablate: all features AUC " << format_double(table.auc_all) << ", wrote "
      << path.string() << "\n";
  return kExitOk;
}

}  // namespace respscreen::cli
