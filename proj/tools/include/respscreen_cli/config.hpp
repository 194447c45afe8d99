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

// Run configuration for the command-line tool. Values come from three layers
// with fixed precedence: command-line flags > key=value config file > defaults.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "respscreen/dataset.hpp"
#include "respscreen/error.hpp"
#include "respscreen/features.hpp"
#include "respscreen/ml/model.hpp"

namespace respscreen::cli {

/// Process exit codes. Each error kind has its own code.
enum ExitCode : int {
  kExitOk = 0,
  kExitUnexpected = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitLeakage = 4,
  kExitCompute = 5,
  kExitFormat = 6,
  kExitPartial = 7,  // finished, but some inputs were skipped
};

int exit_code_for(ErrorKind kind);

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
  bool hashed = true;  // false for keys that cannot change any output bytes
};

/// Every recognised key, in display order.
const std::vector<ConfigKey>& config_keys();

using ConfigValues = std::map<std::string, std::string>;

/// Parses `key = value` lines. '#' starts a comment line; unknown keys and
/// repeated keys are configuration errors naming the line.
ConfigValues parse_config_text(std::string_view text);
ConfigValues load_config_file(const std::filesystem::path& path);

inline constexpr std::string_view kSymptomLayoutId = "respscreen-symptoms-8";
inline constexpr std::string_view kSymptomModality = "symptoms";

struct RunConfig {
  ConfigValues values;  // effective value of every key

  std::filesystem::path manifest;
  std::filesystem::path audio_root;
  std::filesystem::path out_dir;
  std::filesystem::path split_path;
  std::filesystem::path model_path;
  std::uint64_t seed = 0;
  double dev_ratio = 0.8;
  std::size_t folds = 5;
  FilterCriteria filter;
  ExtractionConfig extraction;
  std::string layout_id;
  std::vector<Modality> extract_modalities;
  std::string modality;  // breathing, cough, speech or symptoms
  ml::ModelFamily family = ml::ModelFamily::kLogistic;
  std::vector<double> lambda_grid;          // empty: library default
  std::vector<double> gamma_grid;           // empty: library default
  std::vector<std::size_t> leaf_grid;       // empty: library default
  bool balanced = true;
  double target_specificity = 0.95;
  std::vector<std::filesystem::path> fuse_inputs;
  std::string fuse_name;
  std::map<std::string, std::filesystem::path> infer_models;  // modality -> model file
  std::map<Modality, std::filesystem::path> infer_audio;
  SymptomVector infer_symptoms;
  std::size_t jobs = 1;

  /// Sorted `key=value` lines of the hashed keys.
  std::string canonical() const;
  /// FNV-1a of canonical(), as 16 hex digits.
  std::string hash() const;
  /// "config_hash=<hash>\nseed=<seed>", embedded in every artifact.
  std::string provenance() const;
  /// Hash of the keys that influence feature extraction only.
  std::string extraction_key() const;

  bool symptom_modality() const { return modality == kSymptomModality; }
  std::string layout_for_modality() const;
  /// "<modality>__<family>__<layout>__s<seed>", the stem of model and report files.
  std::string artifact_stem() const;
  std::filesystem::path effective_split_path() const;
  std::filesystem::path effective_model_path() const;
  std::filesystem::path features_path(Modality m) const;
};

/// Applies defaults, then `file`, then `flags`; validates and converts.
RunConfig resolve_config(const ConfigValues& file, const ConfigValues& flags);

/// Configuration error unless `path` exists.
void require_path(const std::filesystem::path& path, std::string_view what);

}  // namespace respscreen::cli
