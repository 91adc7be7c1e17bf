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

// Word-similarity providers (a WordNet-shaped taxonomy and a static embedding
// table) and construction of the bipartite substitution graph.

#ifndef CFEDIT_LEXICON_H_
#define CFEDIT_LEXICON_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cfedit/assignment.h"

namespace cfedit {

enum class PosTag { kNoun, kVerb, kAdj, kAdv, kOther };

std::string_view PosTagName(PosTag tag);
// Accepts NOUN/VERB/ADJ/ADV/OTHER in any case; throws ParseError otherwise.
PosTag ParsePosTag(std::string_view name);

struct Synset {
  std::string id;
  PosTag pos = PosTag::kOther;
  std::vector<std::string> words;
};

// Line-oriented taxonomy:
//   synset <id> <pos> <word,word,...>
//   hyper <child-id> <parent-id>
//   ant <word> <word>
// Blank lines and lines starting with '#' are ignored.
class Taxonomy {
 public:
  static Taxonomy Load(std::istream& in);
  static Taxonomy LoadFile(const std::filesystem::path& path);

  bool Contains(std::string_view word) const;
  // Synset indices of `word`; empty when unknown.
  std::span<const int> SynsetsOf(std::string_view word) const;
  const Synset& synset(int index) const { return synsets_[index]; }
  int num_synsets() const { return static_cast<int>(synsets_.size()); }
  int num_words() const { return static_cast<int>(word_synsets_.size()); }

  // 1 / (1 + L), L the shortest hypernym path between the closest synset
  // pair of the two words. Synsets without a common ancestor meet at a
  // virtual root above all top-level synsets. Throws UnknownWord.
  double PathSimilarity(std::string_view a, std::string_view b) const;

  // Antonyms of every member word of every synset of `word`, sorted.
  std::vector<std::string> Antonyms(std::string_view word) const;

  // Majority POS over the word's synsets (ties go to the earlier tag in
  // NOUN, VERB, ADJ, ADV order); kOther for unknown words.
  PosTag Pos(std::string_view word) const;

 private:
  // (ancestor synset, hop count) pairs sorted by ancestor, including self.
  using AncestorList = std::vector<std::pair<int, int>>;

  int SynsetDistance(int a, int b) const;

  std::vector<Synset> synsets_;
  std::unordered_map<std::string, std::vector<int>> word_synsets_;
  std::unordered_map<std::string, std::vector<std::string>> antonyms_;
  std::vector<AncestorList> ancestors_;
  std::vector<int> root_distance_;
};

// First line "<vocab-size> <dim>", then "<word> <dim floats>" per line.
class EmbeddingTable {
 public:
  static EmbeddingTable Load(std::istream& in);
  static EmbeddingTable LoadFile(const std::filesystem::path& path);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(index_.size()); }
  bool Contains(std::string_view word) const;
  // Throws UnknownWord.
  std::span<const double> Vector(std::string_view word) const;
  // Cosine of the two word vectors. Throws UnknownWord.
  double Cosine(std::string_view a, std::string_view b) const;

 private:
  int dim_ = 0;
  std::unordered_map<std::string, int> index_;
  std::vector<double> values_;
  std::vector<double> norms_;
};

double PathSimilarity(const Taxonomy& taxonomy, std::string_view a,
                      std::string_view b);
double EmbeddingSimilarity(const EmbeddingTable& table, std::string_view a,
                           std::string_view b);
PosTag TagPos(std::string_view token, const Taxonomy* taxonomy);

enum class PosMode { kAgnostic, kSpecific };
enum class WeightSource { kTaxonomy, kEmbedding };
enum class TargetMode { kCopyOfSource, kAntonyms };

struct GraphBuildConfig {
  PosMode pos_mode = PosMode::kAgnostic;
  std::vector<PosTag> pos_tags;  // used when pos_mode == kSpecific
  WeightSource weights = WeightSource::kTaxonomy;
  TargetMode targets = TargetMode::kCopyOfSource;
  bool edge_filter = true;
  double penalty_factor = 10.0;

  // Throws InvalidConfig.
  void Validate() const;
};

struct Providers {
  const Taxonomy* taxonomy = nullptr;
  const EmbeddingTable* embeddings = nullptr;
};

struct Document {
  std::string id;
  std::string text;
};

struct Occurrence {
  int document = 0;
  int token = 0;

  auto operator<=>(const Occurrence&) const = default;
};

// Output of BuildGraph: the graph plus, per source node, every place the word
// occurs in the corpus.
struct SubstitutionGraph {
  BipartiteGraph graph;
  std::vector<std::vector<Occurrence>> provenance;
  std::vector<PosTag> source_pos;
  std::vector<PosTag> target_pos;
  // Words dropped as sources (unknown to the providers or without
  // candidates), in first-occurrence order.
  std::vector<std::string> skipped_words;
  int penalized_edges = 0;
  double penalty_cost = 0.0;
};

// Copy mode: `sources` minus `word`. Antonym mode: taxonomy antonyms.
std::vector<std::string> CandidateTargets(std::string_view word,
                                          const GraphBuildConfig& config,
                                          const Taxonomy* taxonomy,
                                          std::span<const std::string> sources);

// Maps a provider similarity onto a strictly positive cost; higher
// similarity gives a heavier edge.
double SimilarityToCost(double similarity, WeightSource source);

// Throws EmptyGraph when no source word survives filtering. `jobs` > 1 splits
// edge-weight computation across threads; the result does not depend on it.
SubstitutionGraph BuildGraph(std::span<const Document> documents,
                             const GraphBuildConfig& config,
                             const Providers& providers, int jobs = 1);

}  // namespace cfedit

#endif  // CFEDIT_LEXICON_H_
