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

#include <map>
#include <ostream>
#include <set>

#include "common.hpp"
#include "respscreen/text.hpp"
#include "respscreen_cli/commands.hpp"

namespace respscreen::cli {

using detail::Json;

void guard_disjoint(std::span<const std::string> training, std::span<const std::string> test,
                    std::string_view context, std::ostream& log) {
  const std::set<std::string_view> train_ids(training.begin(), training.end());
  std::vector<std::string> overlap;
  for (const auto& id : test) {
    if (train_ids.count(id)) overlap.push_back(id);
  }
  log << "leakage guard (" << context << "): " << training.size() << " training ids, "
      << test.size() << " held-out ids, " << overlap.size() << " shared\n";
  if (overlap.empty()) return;
  std::string list;
  for (std::size_t i = 0; i < overlap.size() && i < 20; ++i) list += (i ? ", " : "") + overlap[i];
  if (overlap.size() > 20) list += ", ...";
  fail(ErrorKind::kLeakage, std::string(context) + ": " + std::to_string(overlap.size()) +
                                " held-out participant(s) reached a training input: " + list);
}

int cmd_split(const RunConfig& config, std::ostream& log) {
  const auto records = detail::load_records(config);
  const auto filtered = filter_participants(records, config.filter);
  const auto pools = assign_pools(filtered.kept);
  const auto split = make_split(pools, config.dev_ratio, config.folds, config.seed);
  guard_disjoint(split.development, split.test, "split", log);

  const auto split_path = config.effective_split_path();
  if (split_path.has_parent_path()) std::filesystem::create_directories(split_path.parent_path());
  save_split(split, split_path, config.hash());

  std::string rejections = detail::comment_block(config.provenance()) + "id,reason\n";
  std::map<std::string, std::size_t> by_reason;
  for (const auto& r : filtered.rejected) {
    rejections += csv_field(r.id) + "," + r.reason + "\n";
    ++by_reason[r.reason];
  }
  detail::write_artifact(config.out_dir / "filter_rejections.csv", rejections);

  const auto labels = detail::labels_by_id(records);
  auto positives = [&](const std::vector<std::string>& ids) {
    std::size_t n = 0;
    for (const auto& id : ids) n += static_cast<std::size_t>(labels.at(id));
    return n;
  };
  Json j = detail::provenance_json(config);
  j["manifest_rows"] = records.size();
  j["retained"] = filtered.kept.size();
  j["rejected"] = filtered.rejected.size();
  j["rejected_by_reason"] = by_reason;
  j["pools"] = {{"non_covid", pools.non_covid.size()},
                {"covid", pools.covid.size()},
                {"recovered", pools.recovered.size()},
                {"observation", pools.observation.size()}};
  j["development"] = {{"total", split.development.size()}, {"covid", positives(split.development)}};
  j["test"] = {{"total", split.test.size()}, {"covid", positives(split.test)}};
  Json folds = Json::array();
  for (const auto& f : split.folds) folds.push_back({{"total", f.size()}, {"covid", positives(f)}});
  j["folds"] = folds;

  std::vector<ParticipantRecord> labeled(pools.non_covid.begin(), pools.non_covid.end());
  labeled.insert(labeled.end(), pools.covid.begin(), pools.covid.end());
  Json odds;
  for (std::size_t s = 0; s < kSymptomCount; ++s) {
    const auto o = odds_ratio(labeled, static_cast<Symptom>(s));
    odds[std::string(kSymptomNames[s])] = {{"ratio", o.ratio}, {"corrected", o.corrected}};
  }
  j["symptom_odds_ratios"] = odds;
  detail::write_json(config.out_dir / "split_summary.json", j);

  log << "split: " << records.size() << " manifest rows, " << filtered.kept.size()
      << " retained, development " << split.development.size() << " ("
      << positives(split.development) << " covid), test " << split.test.size() << " ("
      << positives(split.test) << " covid)\n";
  return kExitOk;
}

}  // namespace respscreen::cli
