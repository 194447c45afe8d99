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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "respscreen/audio.hpp"
#include "respscreen/dataset.hpp"
#include "respscreen/lld.hpp"

namespace respscreen {

/// One dimension of the recording-level feature vector.
struct FeatureDim {
  std::string name;
  std::size_t lld_column;   // column in LLDMatrix
  LldGroup group;
  std::string functional;
  bool voiced_only = false;
};

/// Enumerable layout: 54 functionals over each of the 130 LLD contours,
/// followed by percentile and moment functionals over voiced frames only
/// (F0 > 0) for the six voicing descriptors.
struct FeatureLayout {
  std::string id;
  std::vector<FeatureDim> dims;

  std::size_t size() const { return dims.size(); }
  /// Indices of dimensions derived from LLDs in `groups`.
  std::vector<std::size_t> mask(std::span<const LldGroup> groups) const;
};

inline constexpr std::size_t kFunctionalsPerContour = 54;
inline constexpr std::size_t kVoicedOnlyFunctionals = 14;

const FeatureLayout& feature_layout();

struct FeatureVector {
  std::vector<double> values;
  std::string layout_id;
};

FeatureVector assemble_feature_vector(const LLDMatrix& lld);

struct ExtractionConfig {
  PreprocessConfig preprocess;
  FrameConfig frame;
};

struct ExtractionOutcome {
  std::optional<FeatureVector> features;
  std::string rejection;  // empty when features are present
};

/// preprocess -> LLDs -> functionals for one loaded recording.
ExtractionOutcome extract_recording(const AudioSegment& loaded,
                                    const ExtractionConfig& config = {});

// --------------------------------------------------------------- files

struct FeatureRow {
  std::string id;
  Modality modality = Modality::kBreathing;
  std::vector<double> values;
};

struct FeatureTable {
  std::string layout_id;
  std::vector<std::string> dim_names;
  std::vector<FeatureRow> rows;
  std::string comment;  // provenance lines read back from the file header

  const FeatureRow* find(std::string_view id) const;
};

/// Text form: optional '#' comment lines, header "id,modality,layout_id,<dims>",
/// one row per recording. Doubles use shortest round-trip formatting.
std::string feature_table_to_csv(const FeatureTable& table, std::string_view comment = {});
FeatureTable feature_table_from_csv(std::string_view text);

/// Binary form, little-endian:
///   "RSFV" | u32 version=1 | u32 dims | u32 layout_len | layout bytes |
///   u64 rows | rows of (u32 id_len | id bytes | u8 modality | dims x f64)
std::vector<char> feature_table_to_binary(const FeatureTable& table,
                                          std::string_view comment = {});
FeatureTable feature_table_from_binary(std::string_view bytes);

void save_feature_table(const FeatureTable& table, const std::filesystem::path& path,
                        std::string_view comment = {});
/// Picks the format from the file's leading bytes.
FeatureTable load_feature_table(const std::filesystem::path& path);

}  // namespace respscreen
