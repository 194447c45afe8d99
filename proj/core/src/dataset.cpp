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
#include <charconv>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "respscreen/audio.hpp"
#include "respscreen/dataset.hpp"
#include "respscreen/error.hpp"
#include "respscreen/text.hpp"

namespace respscreen {

namespace fs = std::filesystem;

std::string_view modality_name(Modality m) {
  switch (m) {
    case Modality::kBreathing: return "breathing";
    case Modality::kCough: return "cough";
    case Modality::kSpeech: return "speech";
  }
  return "unknown";
}

Modality parse_modality(std::string_view name) {
  std::string n = to_lower(trim(name));
  if (n == "breathing" || n == "br") return Modality::kBreathing;
  if (n == "cough" || n == "co") return Modality::kCough;
  if (n == "speech" || n == "sp") return Modality::kSpeech;
  fail(ErrorKind::kConfig, "unknown modality '" + std::string(name) + "'");
}

std::string_view status_name(HealthStatus s) {
  switch (s) {
    case HealthStatus::kHealthy: return "healthy";
    case HealthStatus::kExposed: return "exposed";
    case HealthStatus::kRespiratoryAilment: return "respiratory_ailment";
    case HealthStatus::kCovidMild: return "covid_mild";
    case HealthStatus::kCovidModerate: return "covid_moderate";
    case HealthStatus::kCovidAsymptomatic: return "covid_asymptomatic";
    case HealthStatus::kRecovered: return "recovered";
    case HealthStatus::kUnknown: return "unknown";
  }
  return "unknown";
}

bool is_covid(HealthStatus s) {
  return s == HealthStatus::kCovidMild || s == HealthStatus::kCovidModerate ||
         s == HealthStatus::kCovidAsymptomatic;
}

namespace {

bool is_non_covid(HealthStatus s) {
  return s == HealthStatus::kHealthy || s == HealthStatus::kExposed ||
         s == HealthStatus::kRespiratoryAilment;
}

// Canonical names plus the spellings used by the public crowd-sourced metadata.
HealthStatus parse_status(std::string_view text) {
  static const std::map<std::string, HealthStatus> kNames = {
      {"healthy", HealthStatus::kHealthy},
      {"exposed", HealthStatus::kExposed},
      {"no_resp_illness_exposed", HealthStatus::kExposed},
      {"respiratory_ailment", HealthStatus::kRespiratoryAilment},
      {"resp_illness_not_identified", HealthStatus::kRespiratoryAilment},
      {"covid_mild", HealthStatus::kCovidMild},
      {"positive_mild", HealthStatus::kCovidMild},
      {"covid_moderate", HealthStatus::kCovidModerate},
      {"positive_moderate", HealthStatus::kCovidModerate},
      {"covid_asymptomatic", HealthStatus::kCovidAsymptomatic},
      {"positive_asymp", HealthStatus::kCovidAsymptomatic},
      {"recovered", HealthStatus::kRecovered},
      {"recovered_full", HealthStatus::kRecovered},
  };
  auto it = kNames.find(to_lower(trim(text)));
  return it == kNames.end() ? HealthStatus::kUnknown : it->second;
}

Gender parse_gender(std::string_view text) {
  std::string g = to_lower(trim(text));
  if (g == "male" || g == "m") return Gender::kMale;
  if (g == "female" || g == "f") return Gender::kFemale;
  if (g == "other" || g == "o") return Gender::kOther;
  return Gender::kUnknown;
}

std::optional<std::chrono::year_month_day> parse_date(std::string_view text) {
  std::string t = trim(text);
  int y = 0;
  unsigned m = 0, d = 0;
  if (t.size() != 10 || t[4] != '-' || t[7] != '-') return std::nullopt;
  auto ok = [&](std::size_t pos, std::size_t len, auto& out) {
    auto [p, ec] = std::from_chars(t.data() + pos, t.data() + pos + len, out);
    return ec == std::errc() && p == t.data() + pos + len;
  };
  if (!ok(0, 4, y) || !ok(5, 2, m) || !ok(8, 2, d)) return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

std::optional<bool> parse_flag(std::string_view text) {
  std::string t = to_lower(trim(text));
  if (t.empty() || t == "0" || t == "false" || t == "no" || t == "n" || t == "none") {
    return false;
  }
  if (t == "1" || t == "true" || t == "yes" || t == "y") return true;
  return std::nullopt;
}

[[noreturn]] void row_error(std::size_t line, const std::string& what) {
  fail(ErrorKind::kData, "manifest line " + std::to_string(line) + ": " + what);
}

std::string column_for(Modality m) { return std::string(modality_name(m)) + "_path"; }

}  // namespace

std::vector<double> SymptomVector::as_features() const {
  return std::vector<double>(bits.begin(), bits.end());
}

std::vector<ParticipantRecord> parse_manifest(std::string_view text,
                                              const fs::path& audio_root) {
  std::vector<ParticipantRecord> records;
  std::map<std::string, std::size_t> column;
  std::size_t header_fields = 0;
  std::set<std::string> seen;
  bool have_header = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                           : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;

    auto fields = split_fields(line);
    if (!have_header) {
      for (std::size_t i = 0; i < fields.size(); ++i) column[to_lower(trim(fields[i]))] = i;
      for (const char* req : {"id", "age", "gender", "status", "date"}) {
        if (!column.count(req)) row_error(line_no, std::string("missing column '") + req + "'");
      }
      header_fields = fields.size();
      have_header = true;
      continue;
    }
    if (fields.size() != header_fields) {
      row_error(line_no, "expected " + std::to_string(header_fields) + " fields, got " +
                             std::to_string(fields.size()));
    }
    auto cell = [&](const std::string& name) -> std::optional<std::string> {
      auto it = column.find(name);
      if (it == column.end()) return std::nullopt;
      return trim(fields[it->second]);
    };

    ParticipantRecord r;
    r.id = *cell("id");
    if (r.id.empty()) row_error(line_no, "empty id");
    if (!seen.insert(r.id).second) row_error(line_no, "duplicate id '" + r.id + "'");

    std::string age = *cell("age");
    auto [p, ec] = std::from_chars(age.data(), age.data() + age.size(), r.age);
    if (ec != std::errc() || p != age.data() + age.size() || r.age < 0) {
      row_error(line_no, "invalid age '" + age + "'");
    }
    r.gender = parse_gender(*cell("gender"));
    r.raw_status = *cell("status");
    r.status = parse_status(r.raw_status);
    auto date = parse_date(*cell("date"));
    if (!date) row_error(line_no, "invalid date '" + *cell("date") + "'");
    r.recording_date = *date;

    for (std::size_t s = 0; s < kSymptomCount; ++s) {
      auto v = cell(std::string(kSymptomNames[s]));
      if (!v) continue;
      auto flag = parse_flag(*v);
      if (!flag) {
        row_error(line_no, "invalid value '" + *v + "' for " + std::string(kSymptomNames[s]));
      }
      r.symptoms.bits[s] = *flag ? 1 : 0;
    }
    for (Modality m : kAcousticModalities) {
      auto v = cell(column_for(m));
      if (!v || v->empty()) continue;
      fs::path path(*v);
      r.audio_paths[m] = path.is_absolute() ? path : audio_root / path;
    }
    records.push_back(std::move(r));
  }
  if (!have_header) fail(ErrorKind::kData, "manifest has no header row");
  return records;
}

std::vector<ParticipantRecord> load_manifest(const fs::path& path,
                                             const std::optional<fs::path>& audio_root) {
  std::string text = read_file(path.string());
  return parse_manifest(text, audio_root.value_or(path.parent_path()));
}

SymptomVector encode_symptoms(const ParticipantRecord& record) { return record.symptoms; }

// ------------------------------------------------------------------ filter

std::optional<AudioProbe> probe_wav(const fs::path& path) {
  try {
    AudioSegment seg = load_wav(path);
    return AudioProbe{seg.duration(), seg.peak()};
  } catch (const Error&) {
    return std::nullopt;
  }
}

FilterResult filter_participants(std::span<const ParticipantRecord> records,
                                 const FilterCriteria& criteria, const AudioProber& prober) {
  FilterResult out;
  for (const auto& r : records) {
    std::string reason;
    if (r.age < criteria.min_age) {
      reason = "age_below_min";
    } else if (r.age > criteria.max_age) {
      reason = "age_above_max";
    } else {
      for (Modality m : kAcousticModalities) {
        std::string mod(modality_name(m));
        auto it = r.audio_paths.find(m);
        if (it == r.audio_paths.end()) {
          reason = "missing_audio:" + mod;
          break;
        }
        auto probe = prober(it->second);
        if (!probe) {
          reason = "unreadable:" + mod;
          break;
        }
        if (probe->duration_s < criteria.min_duration_s) {
          reason = "too_short:" + mod;
          break;
        }
        if (probe->peak < criteria.min_peak) {
          reason = "too_quiet:" + mod;
          break;
        }
      }
    }
    if (reason.empty()) {
      out.kept.push_back(r);
    } else {
      out.rejected.push_back({r.id, reason});
    }
  }
  return out;
}

// ------------------------------------------------------------------- pools

Pools assign_pools(std::span<const ParticipantRecord> records, const ObservationWindow& window) {
  Pools pools;
  std::vector<std::string> unknown;
  for (const auto& r : records) {
    if (r.status == HealthStatus::kUnknown) {
      unknown.push_back(r.id + " ('" + r.raw_status + "')");
    } else if (is_covid(r.status)) {
      pools.covid.push_back(r);
    } else if (r.status == HealthStatus::kRecovered) {
      pools.recovered.push_back(r);
    } else {
      pools.non_covid.push_back(r);
      if (r.recording_date >= window.first && r.recording_date <= window.last) {
        pools.observation.push_back(r.id);
      }
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown health status for:";
    for (const auto& u : unknown) msg += " " + u;
    fail(ErrorKind::kData, msg);
  }
  return pools;
}

// ------------------------------------------------------------------ splits

namespace {

using Rng = std::mt19937_64;

// Fisher-Yates driven directly by the engine so the permutation is the same
// on every standard library.
template <typename T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

using BinKey = std::pair<int, int>;  // (age decade, gender)

BinKey bin_of(const ParticipantRecord& r) {
  return {r.age / 10, static_cast<int>(r.gender)};
}

// Bins in key order, members sorted by id and then shuffled.
std::vector<std::vector<const ParticipantRecord*>> binned(
    const std::vector<const ParticipantRecord*>& members, Rng& rng) {
  std::map<BinKey, std::vector<const ParticipantRecord*>> bins;
  for (const auto* r : members) bins[bin_of(*r)].push_back(r);
  std::vector<std::vector<const ParticipantRecord*>> out;
  for (auto& [key, v] : bins) {
    std::sort(v.begin(), v.end(), [](auto* a, auto* b) { return a->id < b->id; });
    shuffle_in_place(v, rng);
    out.push_back(std::move(v));
  }
  return out;
}

void split_class(const std::vector<const ParticipantRecord*>& members, double dev_ratio,
                 Rng& rng, std::vector<std::string>& dev, std::vector<std::string>& test) {
  const std::size_t n = members.size();
  auto n_test = static_cast<std::size_t>(std::lround(static_cast<double>(n) * (1.0 - dev_ratio)));
  if (n_test >= n) n_test = n - 1;  // keep the class in development

  auto bins = binned(members, rng);
  std::vector<std::size_t> quota(bins.size());
  std::vector<std::pair<double, std::size_t>> remainder;
  std::size_t assigned = 0;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    double exact = static_cast<double>(bins[b].size()) * static_cast<double>(n_test) /
                   static_cast<double>(n);
    quota[b] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota[b];
    remainder.emplace_back(exact - std::floor(exact), b);
  }
  // Largest remainder first; equal remainders in a seeded random order.
  std::vector<std::size_t> order(bins.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle_in_place(order, rng);
  std::vector<std::size_t> rank(bins.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  std::sort(remainder.begin(), remainder.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return rank[a.second] < rank[b.second];
  });
  for (std::size_t i = 0; assigned < n_test && i < remainder.size(); ++i) {
    std::size_t b = remainder[i].second;
    if (quota[b] < bins[b].size()) {
      ++quota[b];
      ++assigned;
    }
  }
  for (std::size_t b = 0; b < bins.size(); ++b) {
    for (std::size_t i = 0; i < bins[b].size(); ++i) {
      (i < quota[b] ? test : dev).push_back(bins[b][i]->id);
    }
  }
}

}  // namespace

DatasetSplit split_dev_test(const Pools& pools, double dev_ratio, std::uint64_t seed) {
  require(dev_ratio > 0.0 && dev_ratio < 1.0, ErrorKind::kConfig,
          "development ratio must lie in (0, 1)");
  std::set<std::string> observation(pools.observation.begin(), pools.observation.end());
  std::vector<const ParticipantRecord*> negatives, positives;
  for (const auto& r : pools.non_covid) {
    if (!observation.count(r.id)) negatives.push_back(&r);
  }
  for (const auto& r : pools.covid) positives.push_back(&r);
  require(!negatives.empty(), ErrorKind::kData, "non-COVID class is empty");
  require(!positives.empty(), ErrorKind::kData, "COVID class is empty");

  DatasetSplit split;
  split.seed = seed;
  Rng rng(seed);
  split_class(negatives, dev_ratio, rng, split.development, split.test);
  split_class(positives, dev_ratio, rng, split.development, split.test);
  std::sort(split.development.begin(), split.development.end());
  std::sort(split.test.begin(), split.test.end());
  split.observation = pools.observation;
  std::sort(split.observation.begin(), split.observation.end());
  for (const auto& r : pools.recovered) split.recovered.push_back(r.id);
  std::sort(split.recovered.begin(), split.recovered.end());
  return split;
}

std::vector<std::vector<std::string>> make_folds(std::span<const ParticipantRecord> development,
                                                 std::size_t k, std::uint64_t seed) {
  require(k >= 2, ErrorKind::kConfig, "fold count must be at least 2");
  std::vector<const ParticipantRecord*> negatives, positives;
  for (const auto& r : development) (is_covid(r.status) ? positives : negatives).push_back(&r);
  for (const auto* cls : {&negatives, &positives}) {
    if (cls->size() < k) {
      fail(ErrorKind::kData, std::string(cls == &positives ? "COVID" : "non-COVID") +
                                 " class has " + std::to_string(cls->size()) +
                                 " members, fewer than " + std::to_string(k) + " folds");
    }
  }
  // Distinct stream from split_dev_test for the same seed.
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::vector<std::string>> folds(k);
  std::size_t next = 0;
  for (const auto* cls : {&negatives, &positives}) {
    for (const auto& bin : binned(*cls, rng)) {
      for (const auto* r : bin) {
        folds[next].push_back(r->id);
        next = (next + 1) % k;
      }
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

DatasetSplit make_split(const Pools& pools, double dev_ratio, std::size_t k,
                        std::uint64_t seed) {
  DatasetSplit split = split_dev_test(pools, dev_ratio, seed);
  std::map<std::string, const ParticipantRecord*> by_id;
  for (const auto& r : pools.non_covid) by_id[r.id] = &r;
  for (const auto& r : pools.covid) by_id[r.id] = &r;
  std::vector<ParticipantRecord> dev;
  for (const auto& id : split.development) dev.push_back(*by_id.at(id));
  split.folds = make_folds(dev, k, seed);
  return split;
}

std::string split_to_json(const DatasetSplit& split, std::string_view config_hash) {
  nlohmann::ordered_json j;
  j["format"] = "respscreen-split";
  j["version"] = 1;
  j["seed"] = split.seed;
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  j["development"] = split.development;
  j["test"] = split.test;
  j["folds"] = split.folds;
  j["observation"] = split.observation;
  j["recovered"] = split.recovered;
  return j.dump(1) + "\n";
}

DatasetSplit split_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormat, std::string("split file: ") + e.what());
  }
  if (j.value("format", "") != "respscreen-split") {
    fail(ErrorKind::kFormat, "not a split file");
  }
  DatasetSplit s;
  try {
    s.seed = j.at("seed").get<std::uint64_t>();
    s.development = j.at("development").get<std::vector<std::string>>();
    s.test = j.at("test").get<std::vector<std::string>>();
    s.folds = j.at("folds").get<std::vector<std::vector<std::string>>>();
    s.observation = j.at("observation").get<std::vector<std::string>>();
    s.recovered = j.at("recovered").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormat, std::string("split file: ") + e.what());
  }
  return s;
}

void save_split(const DatasetSplit& split, const fs::path& path, std::string_view config_hash) {
  write_file(path.string(), split_to_json(split, config_hash));
}

DatasetSplit load_split(const fs::path& path) { return split_from_json(read_file(path.string())); }

// ---------------------------------------------------------------- symptoms

OddsRatio odds_ratio(std::span<const ParticipantRecord> records, Symptom symptom) {
  double a = 0, b = 0, c = 0, d = 0;
  for (const auto& r : records) {
    bool has = r.symptoms.has(symptom);
    if (is_covid(r.status)) {
      (has ? a : b) += 1;
    } else if (is_non_covid(r.status)) {
      (has ? c : d) += 1;
    }
  }
  require(a + b > 0, ErrorKind::kData, "odds ratio: COVID class is empty");
  require(c + d > 0, ErrorKind::kData, "odds ratio: non-COVID class is empty");
  OddsRatio out;
  if (a == 0 || b == 0 || c == 0 || d == 0) {
    a += 0.5;
    b += 0.5;
    c += 0.5;
    d += 0.5;
    out.corrected = true;
  }
  out.ratio = (a / b) / (c / d);
  return out;
}

}  // namespace respscreen
