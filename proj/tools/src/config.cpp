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

#include "respscreen_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "respscreen/text.hpp"

namespace fs = std::filesystem;

namespace respscreen::cli {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return kExitConfig;
    case ErrorKind::kData: return kExitData;
    case ErrorKind::kFormat: return kExitFormat;
    case ErrorKind::kLeakage: return kExitLeakage;
    case ErrorKind::kCompute: return kExitCompute;
  }
  return kExitUnexpected;
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"manifest", "", "participant manifest (CSV)"},
      {"audio_root", "", "base directory for relative audio paths (default: manifest directory)"},
      {"out", "respscreen-out", "output directory", false},
      {"split", "", "split file (default: <out>/split.json)", false},
      {"model", "", "model file for evaluate (default: <out>/models/<stem>.model)", false},
      {"seed", "2021", "random seed for splits and folds"},
      {"dev_ratio", "0.8", "development share of each class"},
      {"folds", "5", "cross-validation folds"},
      {"min_age", "15", "youngest retained participant"},
      {"max_age", "80", "oldest retained participant"},
      {"min_duration_s", "0.1", "shortest usable recording after trimming, seconds"},
      {"min_peak", "0.0001", "quietest usable recording peak"},
      {"target_rate", "44100", "analysis sampling rate, Hz"},
      {"silence_threshold", "0.0001", "trim threshold on the normalized signal"},
      {"guard_s", "0.05", "guard interval kept around trimmed audio, seconds"},
      {"window_ms", "25", "analysis window length"},
      {"hop_ms", "10", "frame hop"},
      {"fft_size", "2048", "FFT length"},
      {"pitch_window_ms", "60", "pitch analysis window length"},
      {"f0_min_hz", "55", "lowest pitch candidate"},
      {"f0_max_hz", "500", "highest pitch candidate"},
      {"layout_id", std::string(feature_layout().id), "expected acoustic feature layout"},
      {"modalities", "breathing,cough,speech", "modalities processed by extract"},
      {"modality", "breathing", "breathing, cough, speech or symptoms"},
      {"family", "logistic", "logistic, linear_svm, rbf_svm or tree"},
      {"lambda_grid", "", "comma-separated regularization grid (default: built-in)"},
      {"gamma_grid", "", "comma-separated RBF width grid (default: scaled by data)"},
      {"leaf_grid", "", "comma-separated tree minimum leaf sizes (default: built-in)"},
      {"balanced", "true", "inverse-frequency class weights"},
      {"target_specificity", "0.95", "specificity of the reported operating point"},
      {"fuse_inputs", "", "comma-separated score files to fuse"},
      {"fuse_name", "", "name of the fused report (default: member modalities)"},
      {"model_breathing", "", "infer: breathing model file", false},
      {"model_cough", "", "infer: cough model file", false},
      {"model_speech", "", "infer: speech model file", false},
      {"model_symptoms", "", "infer: symptom model file", false},
      {"audio_breathing", "", "infer: breathing recording", false},
      {"audio_cough", "", "infer: cough recording", false},
      {"audio_speech", "", "infer: speech recording", false},
      {"symptoms", "", "infer: comma-separated reported symptoms", false},
      {"jobs", "1", "extraction worker threads", false},
  };
  return keys;
}

namespace {

const ConfigKey* find_key(std::string_view name) {
  for (const auto& k : config_keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  fail(ErrorKind::kConfig, "config key '" + key + "': '" + value + "' is not " + expected);
}

double as_double(const ConfigValues& v, const std::string& key) {
  const std::string text = trim(v.at(key));
  double out = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    bad_value(key, text, "a number");
  }
  return out;
}

std::uint64_t as_uint(const ConfigValues& v, const std::string& key) {
  const std::string text = trim(v.at(key));
  std::uint64_t out = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    bad_value(key, text, "a non-negative integer");
  }
  return out;
}

bool as_bool(const ConfigValues& v, const std::string& key) {
  const std::string t = to_lower(trim(v.at(key)));
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  bad_value(key, t, "a boolean");
}

std::vector<std::string> as_list(const ConfigValues& v, const std::string& key) {
  std::vector<std::string> out;
  const std::string text = trim(v.at(key));
  if (text.empty()) return out;
  for (const auto& f : split_fields(text)) {
    auto t = trim(f);
    if (t.empty()) bad_value(key, text, "a comma-separated list without empty items");
    out.push_back(t);
  }
  return out;
}

std::vector<double> as_double_list(const ConfigValues& v, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : as_list(v, key)) {
    ConfigValues one{{key, item}};
    const double x = as_double(one, key);
    if (!(x > 0.0)) bad_value(key, item, "a positive number");
    out.push_back(x);
  }
  return out;
}

}  // namespace

ConfigValues parse_config_text(std::string_view text) {
  ConfigValues out;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const auto line = trim(text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                         : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) fail(ErrorKind::kConfig, where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!find_key(key)) fail(ErrorKind::kConfig, where + "unknown key '" + key + "'");
    if (!out.emplace(key, trim(line.substr(eq + 1))).second) {
      fail(ErrorKind::kConfig, where + "key '" + key + "' given twice");
    }
  }
  return out;
}

ConfigValues load_config_file(const fs::path& path) {
  require_path(path, "config file");
  return parse_config_text(read_file(path.string()));
}

void require_path(const fs::path& path, std::string_view what) {
  if (path.empty()) fail(ErrorKind::kConfig, std::string(what) + " is not set");
  if (!fs::exists(path)) {
    fail(ErrorKind::kConfig, std::string(what) + " not found: " + path.string());
  }
}

RunConfig resolve_config(const ConfigValues& file, const ConfigValues& flags) {
  RunConfig c;
  for (const auto& k : config_keys()) c.values[k.name] = k.default_value;
  for (const auto* layer : {&file, &flags}) {
    for (const auto& [key, value] : *layer) {
      if (!find_key(key)) fail(ErrorKind::kConfig, "unknown config key '" + key + "'");
      c.values[key] = value;
    }
  }
  const auto& v = c.values;
  auto str = [&](const char* key) { return trim(v.at(key)); };

  c.manifest = str("manifest");
  c.audio_root = str("audio_root");
  c.out_dir = str("out");
  if (c.out_dir.empty()) fail(ErrorKind::kConfig, "config key 'out' must not be empty");
  c.split_path = str("split");
  c.model_path = str("model");
  c.seed = as_uint(v, "seed");
  c.dev_ratio = as_double(v, "dev_ratio");
  if (!(c.dev_ratio > 0.0 && c.dev_ratio < 1.0)) bad_value("dev_ratio", str("dev_ratio"), "in (0, 1)");
  c.folds = as_uint(v, "folds");
  if (c.folds < 2) bad_value("folds", str("folds"), "at least 2");

  c.filter.min_age = static_cast<int>(as_uint(v, "min_age"));
  c.filter.max_age = static_cast<int>(as_uint(v, "max_age"));
  if (c.filter.max_age < c.filter.min_age) bad_value("max_age", str("max_age"), ">= min_age");
  c.filter.min_duration_s = as_double(v, "min_duration_s");
  c.filter.min_peak = as_double(v, "min_peak");

  auto& pre = c.extraction.preprocess;
  pre.target_rate = as_double(v, "target_rate");
  pre.silence_threshold = as_double(v, "silence_threshold");
  pre.guard_s = as_double(v, "guard_s");
  pre.min_duration_s = c.filter.min_duration_s;
  pre.min_peak = c.filter.min_peak;
  if (!(pre.target_rate >= 16000.0)) bad_value("target_rate", str("target_rate"), ">= 16000");
  auto& fr = c.extraction.frame;
  fr.window_ms = as_double(v, "window_ms");
  fr.hop_ms = as_double(v, "hop_ms");
  fr.fft_size = as_uint(v, "fft_size");
  fr.pitch_window_ms = as_double(v, "pitch_window_ms");
  fr.f0_min_hz = as_double(v, "f0_min_hz");
  fr.f0_max_hz = as_double(v, "f0_max_hz");
  if (!(fr.hop_ms > 0.0 && fr.window_ms >= fr.hop_ms)) {
    bad_value("hop_ms", str("hop_ms"), "positive and at most window_ms");
  }
  if (fr.fft_size == 0 || (fr.fft_size & (fr.fft_size - 1)) != 0) {
    bad_value("fft_size", str("fft_size"), "a power of two");
  }
  if (!(fr.f0_min_hz > 0.0 && fr.f0_max_hz > fr.f0_min_hz)) {
    bad_value("f0_max_hz", str("f0_max_hz"), "above f0_min_hz");
  }

  c.layout_id = str("layout_id");
  if (c.layout_id != feature_layout().id) {
    fail(ErrorKind::kConfig, "layout '" + c.layout_id + "' is not supported by this build (" +
                                 feature_layout().id + ")");
  }
  for (const auto& m : as_list(v, "modalities")) c.extract_modalities.push_back(parse_modality(m));
  c.modality = to_lower(str("modality"));
  if (c.modality != kSymptomModality) c.modality = modality_name(parse_modality(c.modality));
  c.family = ml::parse_family(to_lower(str("family")));
  c.lambda_grid = as_double_list(v, "lambda_grid");
  c.gamma_grid = as_double_list(v, "gamma_grid");
  for (double x : as_double_list(v, "leaf_grid")) {
    if (x != static_cast<double>(static_cast<std::size_t>(x))) {
      bad_value("leaf_grid", str("leaf_grid"), "a list of integers");
    }
    c.leaf_grid.push_back(static_cast<std::size_t>(x));
  }
  c.balanced = as_bool(v, "balanced");
  c.target_specificity = as_double(v, "target_specificity");
  if (!(c.target_specificity > 0.0 && c.target_specificity <= 1.0)) {
    bad_value("target_specificity", str("target_specificity"), "in (0, 1]");
  }
  for (const auto& f : as_list(v, "fuse_inputs")) c.fuse_inputs.emplace_back(f);
  c.fuse_name = str("fuse_name");

  for (const char* m : {"breathing", "cough", "speech", "symptoms"}) {
    const auto path = str(("model_" + std::string(m)).c_str());
    if (!path.empty()) c.infer_models[m] = path;
  }
  for (Modality m : kAcousticModalities) {
    const auto path = str(("audio_" + std::string(modality_name(m))).c_str());
    if (!path.empty()) c.infer_audio[m] = path;
  }
  for (const auto& name : as_list(v, "symptoms")) {
    const auto it = std::find(kSymptomNames.begin(), kSymptomNames.end(), to_lower(name));
    if (it == kSymptomNames.end()) bad_value("symptoms", name, "a known symptom");
    c.infer_symptoms.bits[static_cast<std::size_t>(it - kSymptomNames.begin())] = 1;
  }
  c.jobs = as_uint(v, "jobs");
  if (c.jobs == 0) bad_value("jobs", str("jobs"), "at least 1");
  return c;
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& [key, value] : values) {
    const auto* k = find_key(key);
    if (k && k->hashed) out += key + "=" + value + "\n";
  }
  return out;
}

std::string RunConfig::hash() const { return to_hex(fnv1a(canonical())); }

std::string RunConfig::provenance() const {
  return "config_hash=" + hash() + "\nseed=" + std::to_string(seed);
}

std::string RunConfig::extraction_key() const {
  Fnv1a h;
  for (const char* key : {"target_rate", "silence_threshold", "guard_s", "min_duration_s",
                          "min_peak", "window_ms", "hop_ms", "fft_size", "pitch_window_ms",
                          "f0_min_hz", "f0_max_hz", "layout_id"}) {
    h.update(std::string(key) + "=" + values.at(key) + "\n");
  }
  return h.hex();
}

std::string RunConfig::layout_for_modality() const {
  return symptom_modality() ? std::string(kSymptomLayoutId) : layout_id;
}

std::string RunConfig::artifact_stem() const {
  return modality + "__" + std::string(ml::family_name(family)) + "__" + layout_for_modality() +
         "__s" + std::to_string(seed);
}

fs::path RunConfig::effective_split_path() const {
  return split_path.empty() ? out_dir / "split.json" : split_path;
}

fs::path RunConfig::effective_model_path() const {
  return model_path.empty() ? out_dir / "models" / (artifact_stem() + ".model") : model_path;
}

fs::path RunConfig::features_path(Modality m) const {
  return out_dir / "features" / (std::string(modality_name(m)) + ".rsfv");
}

}  // namespace respscreen::cli
