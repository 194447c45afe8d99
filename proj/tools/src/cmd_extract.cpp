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

#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <thread>

#include "common.hpp"
#include "respscreen/audio.hpp"
#include "respscreen/text.hpp"
#include "respscreen_cli/commands.hpp"

namespace fs = std::filesystem;

namespace respscreen::cli {

namespace {

struct Job {
  const ParticipantRecord* record;
  Modality modality;
};

struct JobResult {
  std::optional<std::vector<double>> values;
  std::string reason;  // rejection or error text
  bool error = false;  // unreadable input, as opposed to a quality rejection
  bool reused = false;
};

// Cache entries are named by a hash of the audio bytes, the participant, the
// modality and the extraction settings. A changed input gets a new name.
JobResult run_job(const Job& job, const RunConfig& config, const std::string& settings_key) {
  JobResult out;
  const std::string mod(modality_name(job.modality));
  const auto path_it = job.record->audio_paths.find(job.modality);
  if (path_it == job.record->audio_paths.end()) {
    out.reason = "missing_audio";
    return out;
  }
  std::string bytes;
  try {
    bytes = read_file(path_it->second.string());
  } catch (const Error& e) {
    out.error = true;
    out.reason = std::string("unreadable: ") + e.what();
    return out;
  }
  const std::string key = Fnv1a()
                              .update(settings_key)
                              .update(job.record->id + "\n" + mod + "\n")
                              .update(bytes)
                              .hex();
  const fs::path dir = config.out_dir / "cache" / mod;
  const fs::path features = dir / (key + ".rsfv");
  const fs::path rejection = dir / (key + ".rej");
  try {
    if (fs::exists(features)) {
      auto cached = load_feature_table(features);
      if (cached.rows.size() == 1 && cached.rows[0].id == job.record->id) {
        out.values = std::move(cached.rows[0].values);
        out.reused = true;
        return out;
      }
    } else if (fs::exists(rejection)) {
      out.reason = trim(read_file(rejection.string()));
      out.reused = true;
      return out;
    }
  } catch (const Error&) {
    // A damaged cache entry is recomputed.
  }

  AudioSegment loaded;
  try {
    loaded = decode_wav(bytes);
  } catch (const Error& e) {
    out.error = true;
    out.reason = std::string("corrupt: ") + e.what();
    return out;
  }
  ExtractionOutcome outcome;
  try {
    outcome = extract_recording(loaded, config.extraction);
  } catch (const Error& e) {
    out.error = true;
    out.reason = std::string("compute: ") + e.what();
    return out;
  }
  if (outcome.features) {
    FeatureTable one;
    one.layout_id = outcome.features->layout_id;
    one.dim_names.resize(outcome.features->values.size());
    one.rows.push_back({job.record->id, job.modality, outcome.features->values});
    const auto blob = feature_table_to_binary(one, "extraction_key=" + key);
    detail::write_artifact(features, std::string_view(blob.data(), blob.size()));
    out.values = std::move(outcome.features->values);
  } else {
    detail::write_artifact(rejection, outcome.rejection + "\n");
    out.reason = outcome.rejection;
  }
  return out;
}

}  // namespace

int cmd_extract(const RunConfig& config, std::ostream& log) {
  const auto records = detail::load_records(config);
  require(!config.extract_modalities.empty(), ErrorKind::kConfig, "no modalities to extract");

  // With a split present, only participants that take part in it are processed.
  std::optional<std::set<std::string>> wanted;
  const auto split_path = config.effective_split_path();
  if (fs::exists(split_path)) {
    const auto split = load_split(split_path);
    wanted.emplace();
    for (const auto* list : {&split.development, &split.test, &split.observation, &split.recovered}) {
      wanted->insert(list->begin(), list->end());
    }
  }
  std::vector<Job> jobs;
  for (Modality m : config.extract_modalities) {
    for (const auto& r : records) {
      if (!wanted || wanted->count(r.id)) jobs.push_back({&r, m});
    }
  }

  const std::string settings_key = config.extraction_key();
  for (Modality m : config.extract_modalities) {
    fs::create_directories(config.out_dir / "cache" / std::string(modality_name(m)));
  }
  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        results[i] = run_job(jobs[i], config, settings_key);
      } catch (const std::exception& e) {
        results[i].error = true;
        results[i].reason = std::string("failed: ") + e.what();
      }
    }
  };
  const std::size_t threads = std::min(config.jobs, std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Outputs follow manifest order, whatever the worker count.
  const auto& layout = feature_layout();
  std::string rejections = detail::comment_block(config.provenance()) + "id,modality,reason\n";
  detail::Json summary = detail::provenance_json(config);
  summary["layout_id"] = layout.id;
  std::size_t errors = 0, computed = 0, reused = 0;
  for (Modality m : config.extract_modalities) {
    FeatureTable table;
    table.layout_id = layout.id;
    for (const auto& d : layout.dims) table.dim_names.push_back(d.name);
    std::size_t rejected = 0, failed = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].modality != m) continue;
      auto& res = results[i];
      (res.reused ? reused : computed) += res.error ? 0 : 1;
      if (res.values) {
        table.rows.push_back({jobs[i].record->id, m, std::move(*res.values)});
        continue;
      }
      ++rejected;
      failed += res.error ? 1 : 0;
      std::string reason = res.reason;
      for (char& c : reason) c = c == '\n' ? ' ' : c;
      rejections += csv_field(jobs[i].record->id) + "," + std::string(modality_name(m)) + "," +
                    csv_field(reason) + "\n";
      if (res.error) log << "extract: " << jobs[i].record->id << " " << modality_name(m) << ": " << reason << "\n";
    }
    const auto blob = feature_table_to_binary(table, config.provenance());
    detail::write_artifact(config.features_path(m), std::string_view(blob.data(), blob.size()));
    summary["modalities"][std::string(modality_name(m))] = {
        {"rows", table.rows.size()}, {"rejected", rejected}, {"errors", failed}};
    errors += failed;
    log << "extract: " << modality_name(m) << " " << table.rows.size() << " rows, " << rejected
        << " rejected (" << failed << " unreadable)\n";
  }
  detail::write_artifact(config.out_dir / "features" / "rejections.csv", rejections);
  detail::write_json(config.out_dir / "features" / "extract_summary.json", summary);
  log << "extract: computed " << computed << ", reused " << reused << " from cache\n";
  return errors > 0 ? kExitPartial : kExitOk;
}

}  // namespace respscreen::cli
