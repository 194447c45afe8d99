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
#include <map>
#include <ostream>
#include <set>

#include "common.hpp"
#include "respscreen/eval.hpp"
#include "respscreen/text.hpp"
#include "respscreen_cli/commands.hpp"

namespace fs = std::filesystem;

namespace respscreen::cli {

namespace {

detail::Json operating_json(const eval::OperatingPoint& op) {
  detail::Json j;
  j["threshold"] = op.threshold;
  j["target_reached"] = op.target_reached;
  j["tp"] = op.confusion.tp;
  j["fn"] = op.confusion.fn;
  j["fp"] = op.confusion.fp;
  j["tn"] = op.confusion.tn;
  j["sensitivity"] = op.sensitivity;
  j["specificity"] = op.specificity;
  j["ppv"] = op.ppv;
  j["npv"] = op.npv;
  j["accuracy"] = op.accuracy;
  j["weighted_accuracy"] = op.weighted_accuracy;
  return j;
}

// Writes <stem>.scores.csv, <stem>.roc.csv and <stem>.summary.json.
eval::EvalReport write_report(const RunConfig& config, const std::string& stem,
                              const eval::ScoredSet& set, detail::Json extra) {
  const auto report = eval::evaluate(set, config.target_specificity);
  const auto dir = config.out_dir / "reports";
  const auto prov = config.provenance();
  detail::write_artifact(dir / (stem + ".scores.csv"), eval::scored_set_to_csv(set, prov));
  detail::write_artifact(dir / (stem + ".roc.csv"), eval::roc_to_csv(report.roc, prov));

  detail::Json j = detail::provenance_json(config);
  j["name"] = stem;
  j["modality"] = set.modality;
  std::size_t pos = 0;
  for (int y : set.labels) pos += static_cast<std::size_t>(y);
  j["participants"] = set.size();
  j["covid"] = pos;
  j["auc"] = report.auc;
  j["target_specificity"] = config.target_specificity;
  j["operating_point"] = operating_json(report.operating);
  for (auto& [key, value] : extra.items()) j[key] = value;
  detail::write_json(dir / (stem + ".summary.json"), j);
  return report;
}

}  // namespace

int cmd_evaluate(const RunConfig& config, std::ostream& log) {
  const auto records = detail::load_records(config);
  require_path(config.effective_split_path(), "split file");
  const auto split = load_split(config.effective_split_path());
  const auto model_path = config.effective_model_path();
  require_path(model_path, "model file");
  const auto model = ml::load_model(model_path);
  const auto table = detail::load_modality_table(config, records);
  ml::check_layout(model, table.layout_id);

  // Test subjects must not have reached training in any form.
  guard_disjoint(model.training_ids, split.test, "evaluate", log);

  const auto labels = detail::labels_by_id(records);
  const auto test = detail::gather(table, split.test, labels);
  require(!test.ids.empty(), ErrorKind::kData, "no test rows with features");
  if (!test.missing.empty()) {
    log << "evaluate: " << test.missing.size() << " test participant(s) have no "
        << config.modality << " features and are left out\n";
  }
  eval::ScoredSet set;
  set.ids = test.ids;
  set.labels = test.y;
  set.scores = model.score(test.x);
  set.modality = config.modality;

  detail::Json extra;
  extra["model"] = model_path.filename().string();
  extra["family"] = ml::family_name(model.family);
  extra["missing_test_ids"] = test.missing;
  extra["leakage_guard"] = {{"training_ids", model.training_ids.size()},
                            {"test_ids", split.test.size()},
                            {"shared", 0}};
  // Score distributions of the held-aside subsets, excluding anyone trained on.
  const std::set<std::string> trained(model.training_ids.begin(), model.training_ids.end());
  for (const auto& [name, ids] : {std::pair{"observation", &split.observation},
                                  std::pair{"recovered", &split.recovered}}) {
    std::vector<std::string> keep;
    for (const auto& id : *ids) {
      if (!trained.count(id)) keep.push_back(id);
    }
    const auto rows = detail::gather(table, keep, labels);
    const auto scores = model.score(rows.x);
    const auto h = eval::score_histogram(scores, name, config.modality);
    extra["histograms"][name] = {{"total", h.total}, {"counts", h.counts}};
  }

  const auto report = write_report(config, config.artifact_stem(), set, extra);
  log << "evaluate: " << config.modality << " test AUC " << format_double(report.auc)
      << ", sensitivity " << format_double(report.operating.sensitivity) << " at specificity "
      << format_double(report.operating.specificity) << "\n";
  return kExitOk;
}

int cmd_fuse(const RunConfig& config, std::ostream& log) {
  require(config.fuse_inputs.size() >= 2, ErrorKind::kConfig,
          "fuse needs at least two score files (fuse_inputs)");
  std::vector<eval::ScoredSet> members;
  for (const auto& path : config.fuse_inputs) {
    require_path(path, "score file");
    members.push_back(eval::scored_set_from_csv(read_file(path.string())));
    if (members.back().modality.empty()) members.back().modality = path.stem().string();
  }

  // Fusion covers the participants scored by every member.
  std::map<std::string, std::size_t> count;
  for (const auto& m : members) {
    for (const auto& id : m.ids) ++count[id];
  }
  std::size_t dropped = 0;
  for (auto& m : members) {
    eval::ScoredSet kept;
    kept.modality = m.modality;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (count[m.ids[i]] != members.size()) {
        ++dropped;
        continue;
      }
      kept.ids.push_back(m.ids[i]);
      kept.labels.push_back(m.labels[i]);
      kept.scores.push_back(m.scores[i]);
    }
    m = std::move(kept);
  }
  if (dropped > 0) log << "fuse: " << dropped << " score(s) without a partner in every member dropped\n";

  const auto fused = eval::fuse(members);
  const auto corr = eval::score_cross_correlation(members);
  detail::Json extra;
  detail::Json mj = detail::Json::array();
  for (std::size_t i = 0; i < members.size(); ++i) {
    mj.push_back({{"modality", members[i].modality},
                  {"file", config.fuse_inputs[i].filename().string()},
                  {"auc", eval::auc(members[i])}});
  }
  extra["members"] = mj;
  extra["cross_correlation"] = corr;
  const std::string name =
      (config.fuse_name.empty() ? fused.modality : config.fuse_name) + "__s" + std::to_string(config.seed);
  const auto report = write_report(config, name, fused, extra);
  log << "fuse: " << fused.modality << " test AUC " << format_double(report.auc) << "\n";
  return kExitOk;
}

int cmd_report(const RunConfig& config, std::ostream& log) {
  const auto dir = config.out_dir / "reports";
  require_path(dir, "reports directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.ends_with(".summary.json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  require(!files.empty(), ErrorKind::kData, "no evaluation summaries in " + dir.string());

  std::string csv = detail::comment_block(config.provenance()) +
                    "name,modality,participants,covid,auc,threshold,sensitivity,specificity,ppv,npv,"
                    "accuracy,weighted_accuracy,config_hash,seed\n";
  for (const auto& f : files) {
    detail::Json j;
    try {
      j = detail::Json::parse(read_file(f.string()));
      const auto& op = j.at("operating_point");
      csv += csv_field(j.at("name").get<std::string>()) + "," +
             csv_field(j.at("modality").get<std::string>()) + "," +
             std::to_string(j.at("participants").get<std::size_t>()) + "," +
             std::to_string(j.at("covid").get<std::size_t>()) + "," +
             format_double(j.at("auc").get<double>()) + "," +
             format_double(op.at("threshold").get<double>()) + "," +
             format_double(op.at("sensitivity").get<double>()) + "," +
             format_double(op.at("specificity").get<double>()) + "," +
             format_double(op.at("ppv").get<double>()) + "," +
             format_double(op.at("npv").get<double>()) + "," +
             format_double(op.at("accuracy").get<double>()) + "," +
             format_double(op.at("weighted_accuracy").get<double>()) + "," +
             j.at("config_hash").get<std::string>() + "," +
             std::to_string(j.at("seed").get<std::uint64_t>()) + "\n";
    } catch (const detail::Json::exception& e) {
      fail(ErrorKind::kFormat, f.string() + ": " + e.what());
    }
    log << j.at("name").get<std::string>() << "  AUC " << format_double(j.at("auc").get<double>())
        << "\n";
  }
  detail::write_artifact(dir / "summary.csv", csv);
  log << "report: " << files.size() << " result(s) in " << (dir / "summary.csv").string() << "\n";
  return kExitOk;
}

}  // namespace respscreen::cli
