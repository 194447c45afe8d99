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

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace respscreen {

enum class Modality { kBreathing = 0, kCough = 1, kSpeech = 2 };

inline constexpr std::array<Modality, 3> kAcousticModalities = {
    Modality::kBreathing, Modality::kCough, Modality::kSpeech};

std::string_view modality_name(Modality m);
Modality parse_modality(std::string_view name);

enum class Gender { kMale, kFemale, kOther, kUnknown };

enum class HealthStatus {
  kHealthy,
  kExposed,
  kRespiratoryAilment,
  kCovidMild,
  kCovidModerate,
  kCovidAsymptomatic,
  kRecovered,
  kUnknown,
};

std::string_view status_name(HealthStatus s);
bool is_covid(HealthStatus s);

/// Symptom order of the binary symptom vector. Fixed; every stored artifact
/// and every trained tree indexes symptoms in this order.
enum class Symptom {
  kFever = 0,
  kCold,
  kCough,
  kFatigue,
  kMusclePain,
  kLossOfSmell,
  kSoreThroat,
  kBreathingDifficulty,
};

inline constexpr std::size_t kSymptomCount = 8;

inline constexpr std::array<std::string_view, kSymptomCount> kSymptomNames = {
    "fever",        "cold",          "cough",       "fatigue",
    "muscle_pain",  "loss_of_smell", "sore_throat", "breathing_difficulty"};

struct SymptomVector {
  std::array<std::uint8_t, kSymptomCount> bits{};

  bool operator==(const SymptomVector&) const = default;
  bool has(Symptom s) const { return bits[static_cast<std::size_t>(s)] != 0; }
  std::vector<double> as_features() const;
};

struct ParticipantRecord {
  std::string id;
  int age = 0;
  Gender gender = Gender::kUnknown;
  HealthStatus status = HealthStatus::kUnknown;
  std::string raw_status;  // original cell text, kept for error reporting
  std::chrono::year_month_day recording_date{};
  SymptomVector symptoms;
  std::map<Modality, std::filesystem::path> audio_paths;
};

/// Reads a comma-separated manifest with a header row. Required columns:
/// id, age, gender, status, date. Optional: the eight symptom columns (named
/// as in kSymptomNames) and breathing_path, cough_path, speech_path. Relative
/// audio paths resolve against `audio_root` (defaults to the manifest's
/// directory). Lines starting with '#' are comments.
std::vector<ParticipantRecord> load_manifest(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& audio_root = std::nullopt);

std::vector<ParticipantRecord> parse_manifest(
    std::string_view text, const std::filesystem::path& audio_root);

SymptomVector encode_symptoms(const ParticipantRecord& record);

// ---------------------------------------------------------------- filtering

struct FilterCriteria {
  int min_age = 15;
  int max_age = 80;
  double min_duration_s = 0.100;
  double min_peak = 1e-4;
};

struct AudioProbe {
  double duration_s = 0.0;
  double peak = 0.0;
};

/// Returns std::nullopt when the file cannot be read.
using AudioProber =
    std::function<std::optional<AudioProbe>(const std::filesystem::path&)>;

/// Default prober: decodes the wave file and reports loaded duration and peak.
std::optional<AudioProbe> probe_wav(const std::filesystem::path& path);

struct Rejection {
  std::string id;
  std::string reason;
};

struct FilterResult {
  std::vector<ParticipantRecord> kept;
  std::vector<Rejection> rejected;
};

FilterResult filter_participants(std::span<const ParticipantRecord> records,
                                 const FilterCriteria& criteria = {},
                                 const AudioProber& prober = probe_wav);

// -------------------------------------------------------------------- pools

struct Pools {
  std::vector<ParticipantRecord> non_covid;  // includes the observation subset
  std::vector<ParticipantRecord> covid;
  std::vector<ParticipantRecord> recovered;
  std::vector<std::string> observation;      // ids, subset of non_covid
};

struct ObservationWindow {
  std::chrono::year_month_day first{std::chrono::year{2021}, std::chrono::month{4},
                                    std::chrono::day{1}};
  std::chrono::year_month_day last{std::chrono::year{2021}, std::chrono::month{5},
                                   std::chrono::day{7}};
};

Pools assign_pools(std::span<const ParticipantRecord> records,
                   const ObservationWindow& window = {});

// ------------------------------------------------------------------- splits

struct DatasetSplit {
  std::vector<std::string> development;
  std::vector<std::string> test;
  std::vector<std::vector<std::string>> folds;
  std::vector<std::string> observation;
  std::vector<std::string> recovered;
  std::uint64_t seed = 0;

  bool operator==(const DatasetSplit&) const = default;
};

/// Stratified development/test split of the non-COVID (minus observation)
/// and COVID pools. Classes are split independently; inside a class, records
/// are grouped into age-decade x gender bins and the test quota is spread over
/// bins by largest remainder, so both subsets keep the bin mix. Shuffling uses
/// std::mt19937_64 seeded with `seed`. Folds are left empty; see make_folds.
DatasetSplit split_dev_test(const Pools& pools, double dev_ratio,
                            std::uint64_t seed);

/// k stratified folds over `development`. Within a class, records are ordered
/// by bin then shuffled inside the bin, and dealt round-robin; the next class
/// continues dealing where the previous one stopped.
std::vector<std::vector<std::string>> make_folds(
    std::span<const ParticipantRecord> development, std::size_t k,
    std::uint64_t seed);

/// Convenience: pools -> split with folds filled in.
DatasetSplit make_split(const Pools& pools, double dev_ratio, std::size_t k,
                        std::uint64_t seed);

std::string split_to_json(const DatasetSplit& split, std::string_view config_hash = {});
DatasetSplit split_from_json(std::string_view text);
void save_split(const DatasetSplit& split, const std::filesystem::path& path,
                std::string_view config_hash = {});
DatasetSplit load_split(const std::filesystem::path& path);

// ----------------------------------------------------------------- symptoms

struct OddsRatio {
  double ratio = 1.0;
  bool corrected = false;  // Haldane-Anscombe +0.5 applied to every cell
};

/// (a/b)/(c/d) with a/b = COVID with/without the symptom and c/d the same for
/// non-COVID. Any zero cell switches all four cells to +0.5.
OddsRatio odds_ratio(std::span<const ParticipantRecord> records, Symptom symptom);

}  // namespace respscreen
