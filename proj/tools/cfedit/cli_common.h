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

// Shared plumbing for the cfedit subcommands: global options, manifests,
// path checks, and the corpus options used by graph-building commands.

#ifndef CFEDIT_TOOLS_CLI_COMMON_H_
#define CFEDIT_TOOLS_CLI_COMMON_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfedit/classifier.h"
#include "cfedit/gnn.h"
#include "cfedit/lexicon.h"
#include "json.hpp"

namespace cfedit::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct GlobalOptions {
  std::string data_dir = "data";
  int jobs = 1;
  uint64_t seed = 0;
  bool quiet = false;
};

// Resolved configuration of a command: every option of the command and of
// the top-level app, with defaults filled in.
nlohmann::ordered_json BuildManifest(const CLI::App& command);

// One-line "# cfedit-manifest {...}" header for text outputs.
std::string ManifestComment(const nlohmann::ordered_json& manifest);

// Opens a file for writing, creating parent directories. Throws IoError.
std::ofstream OpenOutput(const std::filesystem::path& path);

// Throws IoError unless every path names a readable regular file.
void RequireFiles(const std::vector<std::filesystem::path>& paths);

// Reads the manifest header written by ManifestComment, or null if absent.
nlohmann::ordered_json ReadManifestComment(const std::filesystem::path& path);

// Resolves `value` against the data directory when it is empty.
std::filesystem::path DataFile(const GlobalOptions& global, const std::string& value,
                               const char* default_name);

// Progress messages on stderr, silenced by --quiet.
void Log(const GlobalOptions& global, const std::string& message);

struct CorpusOptions {
  std::string dataset;
  std::string taxonomy;
  std::string embeddings;
  std::string weights = "taxonomy";
  std::string targets = "copy";
  std::string pos;
  double penalty_factor = 10.0;
  bool no_edge_filter = false;
  int limit = 0;
};

void AddCorpusOptions(CLI::App* command, CorpusOptions* options);

// Everything a graph-building command needs once files are loaded.
struct LoadedCorpus {
  LabeledDataset dataset;
  std::vector<Document> documents;
  Taxonomy taxonomy;
  EmbeddingTable embeddings;
  GraphBuildConfig graph_config;

  Providers providers() const { return {&taxonomy, &embeddings}; }
};

LoadedCorpus LoadCorpus(const GlobalOptions& global, const CorpusOptions& options);

// Loads a checkpoint file, validating the path first.
Checkpoint LoadModel(const std::string& path);

}  // namespace cfedit::cli

#endif  // CFEDIT_TOOLS_CLI_COMMON_H_
