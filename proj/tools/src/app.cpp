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
#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "respscreen_cli/commands.hpp"

namespace respscreen::cli {

namespace {

struct Subcommand {
  const char* name;
  const char* help;
  int (*run)(const RunConfig&, std::ostream&);
};

constexpr Subcommand kSubcommands[] = {
    {"split", "filter the manifest and write the development/test split and folds", cmd_split},
    {"extract", "compute acoustic feature files per modality (resumable)", cmd_extract},
    {"cv", "grid-search hyperparameters by cross-validation on the development set", cmd_cv},
    {"train", "cross-validate, then fit and save the final model", cmd_train},
    {"evaluate", "score the test set with a saved model and write ROC and metrics", cmd_evaluate},
    {"fuse", "average score files and evaluate the fused scores", cmd_fuse},
    {"ablate", "test AUC with and without each feature group", cmd_ablate},
    {"infer", "score one participant from recordings and symptom flags", cmd_infer},
    {"report", "collect evaluation summaries into one table", cmd_report},
};

constexpr const char* kFooter =
    "Settings: flags override the --config file, which overrides built-in defaults.\n"
    "Exit codes: 0 ok, 1 unexpected, 2 config, 3 data, 4 leakage, 5 compute,\n"
    "            6 artifact format, 7 partial (some inputs skipped).";

std::string flag_name(const std::string& key) {
  std::string f = key;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"respscreen: respiratory-sound screening pipeline", "respscreen"};
  app.footer(kFooter);
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_file;
  app.add_option("-c,--config", config_file, "key = value configuration file");
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;
  for (const auto& key : config_keys()) {
    std::string help = key.help;
    if (!key.default_value.empty()) help += " [" + key.default_value + "]";
    flag_options[key.name] = app.add_option(flag_name(key.name), flag_values[key.name], help);
  }
  std::vector<CLI::App*> subs;
  for (const auto& s : kSubcommands) subs.push_back(app.add_subcommand(s.name, s.help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    ConfigValues file;
    if (!config_file.empty()) file = load_config_file(config_file);
    ConfigValues flags;
    for (const auto& [name, opt] : flag_options) {
      if (opt->count() > 0) flags[name] = flag_values[name];
    }
    const auto config = resolve_config(file, flags);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return kSubcommands[i].run(config, out);
    }
    return kExitUnexpected;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnexpected;
  }
}

}  // namespace respscreen::cli
