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

#include <chrono>
#include <ostream>

#include "respscreen/audio.hpp"
#include "respscreen/text.hpp"
#include "respscreen_cli/commands.hpp"

namespace respscreen::cli {

namespace {

// Re-raises `e` with the name of the input that caused it.
[[noreturn]] void blame(const std::string& input, const Error& e) {
  throw Error(e.kind(), input + ": " + e.what());
}

ml::TrainedModel load_named_model(const std::string& modality,
                                  const std::map<std::string, std::filesystem::path>& models) {
  const auto it = models.find(modality);
  if (it == models.end()) {
    fail(ErrorKind::kConfig, "no model given for " + modality + " (model_" + modality + ")");
  }
  const std::string name = "model_" + modality + " (" + it->second.string() + ")";
  try {
    require_path(it->second, name);
    return ml::load_model(it->second);
  } catch (const Error& e) {
    blame(name, e);
  }
}

}  // namespace

InferResult infer(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  InferResult out;
  for (const auto& [modality, path] : config.infer_audio) {
    const std::string mod(modality_name(modality));
    const auto model = load_named_model(mod, config.infer_models);
    const std::string name = "audio_" + mod + " (" + path.string() + ")";
    ExtractionOutcome outcome;
    try {
      require_path(path, name);
      outcome = extract_recording(load_wav(path), config.extraction);
    } catch (const Error& e) {
      blame(name, e);
    }
    if (!outcome.features) fail(ErrorKind::kData, name + ": recording rejected (" + outcome.rejection + ")");
    ml::check_layout(model, outcome.features->layout_id);
    out.scores.emplace_back(mod, model.score(outcome.features->values));
  }
  if (config.infer_models.count(std::string(kSymptomModality))) {
    const auto model = load_named_model(std::string(kSymptomModality), config.infer_models);
    ml::check_layout(model, kSymptomLayoutId);
    out.scores.emplace_back(std::string(kSymptomModality),
                            model.score(config.infer_symptoms.as_features()));
  }
  require(!out.scores.empty(), ErrorKind::kConfig,
          "infer needs at least one recording (audio_<modality>) or a symptom model");

  // Same arithmetic as score fusion: identical inputs give that exact value.
  const double ref = out.scores.front().second;
  double acc = 0.0;
  for (const auto& [name, s] : out.scores) acc += s - ref;
  out.fused = std::clamp(ref + acc / static_cast<double>(out.scores.size()), 0.0, 1.0);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

int cmd_infer(const RunConfig& config, std::ostream& log) {
  const auto result = infer(config);
  for (const auto& [name, s] : result.scores) log << name << "\t" << format_double(s) << "\n";
  log << "fused\t" << format_double(result.fused) << "\n";
  log << "latency_s\t" << format_double(result.seconds) << "\n";
  return kExitOk;
}

}  // namespace respscreen::cli
