// Copyright 2026 The cfedit Authors
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

// cfedit: counterfactual word-substitution toolkit.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data or I/O
// error, 3 training divergence.

#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "cfedit/errors.h"
#include "cli_common.h"
#include "commands.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDivergence = 3;

}  // namespace

int main(int argc, char** argv) {
  using cfedit::cli::GlobalOptions;
  CLI::App app{"Counterfactual word substitution: graph building, assignment solving, "
               "beam-search editing and evaluation.",
               "cfedit"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", cfedit::cli::kToolVersion);
  app.set_config("--config", "", "TOML/INI file; [command] sections hold per-command options");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--data-dir", global.data_dir, "Directory holding the bundled data files")
      ->envname("CFEDIT_DATA_DIR");
  app.add_option("--jobs", global.jobs, "Worker threads for graph building and editing")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", global.seed, "Seed for every stochastic component");
  app.add_flag("--quiet", global.quiet, "Suppress progress messages");

  cfedit::cli::RegisterGenData(app, global);
  cfedit::cli::RegisterTrainGnn(app, global);
  cfedit::cli::RegisterEvalGnn(app, global);
  cfedit::cli::RegisterBuildGraph(app, global);
  cfedit::cli::RegisterEdit(app, global);
  cfedit::cli::RegisterEvaluate(app, global);
  cfedit::cli::RegisterBench(app, global);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const cfedit::InvalidConfig& e) {
    std::fprintf(stderr, "cfedit: invalid configuration: %s\n", e.what());
    return kExitUsage;
  } catch (const cfedit::DivergenceError& e) {
    std::fprintf(stderr, "cfedit: training diverged: %s\n", e.what());
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cfedit: error: %s\n", e.what());
    return kExitData;
  }
  return 0;
}
