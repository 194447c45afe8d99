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

// Helpers shared by the subcommand implementations.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "respscreen/dataset.hpp"
#include "respscreen/features.hpp"
#include "respscreen/ml/cross_validate.hpp"
#include "respscreen_cli/config.hpp"

namespace respscreen::cli::detail {

using Json = nlohmann::ordered_json;

/// Writes `text` to `path`, creating parent directories. The file is written
/// under a temporary name and renamed, so readers never see partial output.
void write_artifact(const std::filesystem::path& path, std::string_view text);
void write_json(const std::filesystem::path& path, const Json& j);
Json provenance_json(const RunConfig& config);
/// Prefixes every line of `text` with "# ".
std::string comment_block(std::string_view text);

std::vector<ParticipantRecord> load_records(const RunConfig& config);
/// COVID label (1) or not (0) for every participant of the manifest.
std::map<std::string, int> labels_by_id(const std::vector<ParticipantRecord>& records);

/// Feature table of the configured modality: acoustic tables come from the
/// extract output, symptom tables from the manifest.
FeatureTable load_modality_table(const RunConfig& config,
                                 const std::vector<ParticipantRecord>& records);
FeatureTable symptom_table(const std::vector<ParticipantRecord>& records);

struct Labeled {
  ml::Matrix x;
  std::vector<int> y;
  std::vector<std::string> ids;
  std::vector<std::string> missing;  // requested ids without a feature row
};

Labeled gather(const FeatureTable& table, const std::vector<std::string>& ids,
               const std::map<std::string, int>& labels);

/// Maps fold id lists onto row indices of `dev`; ids without features drop out.
ml::Folds fold_rows(const DatasetSplit& split, const Labeled& dev);

std::vector<ml::Hyperparameters> grid_for(const RunConfig& config, const ml::Matrix& x);
ml::TrainOptions train_options(const RunConfig& config);

Json hyperparameters_json(const ml::Hyperparameters& hp);

}  // namespace respscreen::cli::detail
