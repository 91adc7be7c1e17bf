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

// Subcommand registration. Each Register* call adds one subcommand to the
// app and installs its callback.

#ifndef CFEDIT_TOOLS_COMMANDS_H_
#define CFEDIT_TOOLS_COMMANDS_H_

#include "CLI11.hpp"
#include "cli_common.h"

namespace cfedit::cli {

void RegisterGenData(CLI::App& app, const GlobalOptions& global);
void RegisterTrainGnn(CLI::App& app, const GlobalOptions& global);
void RegisterEvalGnn(CLI::App& app, const GlobalOptions& global);
void RegisterBench(CLI::App& app, const GlobalOptions& global);
void RegisterBuildGraph(CLI::App& app, const GlobalOptions& global);
void RegisterEdit(CLI::App& app, const GlobalOptions& global);
void RegisterEvaluate(CLI::App& app, const GlobalOptions& global);

}  // namespace cfedit::cli

#endif  // CFEDIT_TOOLS_COMMANDS_H_
