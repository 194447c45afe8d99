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

// Subcommands of the respscreen tool. Each takes a resolved configuration,
// writes its artifacts under the output directory, logs progress to `log`
// and returns a process exit code. Failures raise respscreen::Error.

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "respscreen_cli/config.hpp"

namespace respscreen::cli {

int cmd_split(const RunConfig& config, std::ostream& log);
int cmd_extract(const RunConfig& config, std::ostream& log);
int cmd_train(const RunConfig& config, std::ostream& log);
int cmd_cv(const RunConfig& config, std::ostream& log);
int cmd_evaluate(const RunConfig& config, std::ostream& log);
int cmd_fuse(const RunConfig& config, std::ostream& log);
int cmd_ablate(const RunConfig& config, std::ostream& log);
int cmd_report(const RunConfig& config, std::ostream& log);
int cmd_infer(const RunConfig& config, std::ostream& log);

struct InferResult {
  std::vector<std::pair<std::string, double>> scores;  // modality, score
  double fused = 0.0;
  double seconds = 0.0;  // input to decision, including model loading
};

InferResult infer(const RunConfig& config);

/// Leakage guard: raises a leakage error listing every id of `test` that is
/// present in `training`. Logs the check either way.
void guard_disjoint(std::span<const std::string> training, std::span<const std::string> test,
                    std::string_view context, std::ostream& log);

/// Parses the command line, runs one subcommand and maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace respscreen::cli
