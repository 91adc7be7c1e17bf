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

#include "cli_common.h"

#include <iostream>
#include <sstream>

#include "cfedit/errors.h"

namespace cfedit::cli {
namespace {

constexpr std::string_view kManifestTag = "# cfedit-manifest ";

nlohmann::ordered_json OptionValues(const CLI::App& app) {
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" || name == "version") continue;
    if (opt->get_items_expected_max() == 0) {
      values[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const std::vector<std::string>& results = opt->results();
      values[name] = results.size() == 1 ? nlohmann::ordered_json(results.front())
                                         : nlohmann::ordered_json(results);
    } else {
      values[name] = opt->get_default_str();
    }
  }
  return values;
}

}  // namespace

nlohmann::ordered_json BuildManifest(const CLI::App& command) {
  nlohmann::ordered_json manifest;
  manifest["tool"] = "cfedit";
  manifest["version"] = kToolVersion;
  manifest["command"] = command.get_name();
  const CLI::App* root = command.get_parent() != nullptr ? command.get_parent() : &command;
  manifest["global"] = OptionValues(*root);
  manifest["options"] = OptionValues(command);
  return manifest;
}

std::string ManifestComment(const nlohmann::ordered_json& manifest) {
  return std::string(kManifestTag) + manifest.dump() + "\n";
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void RequireFiles(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(p, ec)) {
      throw IoError("missing input file " + p.string());
    }
    std::ifstream probe(p);
    if (!probe) throw IoError("cannot read " + p.string());
  }
}

nlohmann::ordered_json ReadManifestComment(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind(kManifestTag, 0) != 0) return nullptr;
  try {
    return nlohmann::ordered_json::parse(line.substr(kManifestTag.size()));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bad manifest line in " + path.string() + ": " + e.what());
  }
}

std::filesystem::path DataFile(const GlobalOptions& global, const std::string& value,
                               const char* default_name) {
  if (!value.empty()) return value;
  return std::filesystem::path(global.data_dir) / default_name;
}

void Log(const GlobalOptions& global, const std::string& message) {
  if (!global.quiet) std::cerr << "cfedit: " << message << '\n';
}

void AddCorpusOptions(CLI::App* command, CorpusOptions* o) {
  command->add_option("--dataset", o->dataset,
                      "Labeled JSON-lines corpus (default: <data-dir>/sentiment.jsonl)");
  command->add_option("--taxonomy", o->taxonomy,
                      "Taxonomy file (default: <data-dir>/taxonomy.txt)");
  command->add_option("--embeddings", o->embeddings,
                      "Embedding table (default: <data-dir>/embeddings.txt)");
  command->add_option("--weights", o->weights, "Edge weights")
      ->check(CLI::IsMember({"taxonomy", "embedding"}));
  command->add_option("--targets", o->targets, "Candidate targets")
      ->check(CLI::IsMember({"copy", "antonyms"}));
  command->add_option("--pos", o->pos,
                      "Comma-separated POS tags to keep (noun,verb,adj,adv); empty keeps all");
  command->add_option("--penalty-factor", o->penalty_factor, "Cross-POS edge penalty factor")
      ->check(CLI::PositiveNumber);
  command->add_flag("--no-edge-filter", o->no_edge_filter, "Disable cross-POS penalties");
  command->add_option("--limit", o->limit, "Use only the first N documents (0 = all)")
      ->check(CLI::NonNegativeNumber);
}

LoadedCorpus LoadCorpus(const GlobalOptions& global, const CorpusOptions& o) {
  const auto dataset = DataFile(global, o.dataset, "sentiment.jsonl");
  const auto taxonomy = DataFile(global, o.taxonomy, "taxonomy.txt");
  const auto embeddings = DataFile(global, o.embeddings, "embeddings.txt");
  RequireFiles({dataset, taxonomy, embeddings});

  GraphBuildConfig config;
  config.weights = o.weights == "embedding" ? WeightSource::kEmbedding : WeightSource::kTaxonomy;
  config.targets = o.targets == "antonyms" ? TargetMode::kAntonyms : TargetMode::kCopyOfSource;
  config.penalty_factor = o.penalty_factor;
  config.edge_filter = !o.no_edge_filter;
  if (!o.pos.empty()) {
    config.pos_mode = PosMode::kSpecific;
    std::stringstream list(o.pos);
    for (std::string tag; std::getline(list, tag, ',');) {
      if (tag.empty()) continue;
      try {
        config.pos_tags.push_back(ParsePosTag(tag));
      } catch (const Error& e) {
        throw InvalidConfig("--pos: " + std::string(e.what()));
      }
    }
  }
  config.Validate();

  LoadedCorpus corpus;
  corpus.graph_config = std::move(config);
  corpus.dataset = ReadJsonLinesFile(dataset);
  if (o.limit > 0 && static_cast<size_t>(o.limit) < corpus.dataset.instances.size()) {
    corpus.dataset.instances.resize(o.limit);
  }
  corpus.dataset.Validate();
  for (const LabeledInstance& inst : corpus.dataset.instances) {
    corpus.documents.push_back({inst.id, inst.text});
  }
  corpus.taxonomy = Taxonomy::LoadFile(taxonomy);
  corpus.embeddings = EmbeddingTable::LoadFile(embeddings);
  Log(global, "loaded " + std::to_string(corpus.documents.size()) + " documents from " +
                  dataset.string());
  return corpus;
}

Checkpoint LoadModel(const std::string& path) {
  if (path.empty()) throw InvalidConfig("--model is required for the gnn solver");
  RequireFiles({path});
  return LoadCheckpoint(std::filesystem::path(path));
}

}  // namespace cfedit::cli
