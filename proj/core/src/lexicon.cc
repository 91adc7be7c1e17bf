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

#include "cfedit/lexicon.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "cfedit/errors.h"
#include "cfedit/text.h"

namespace cfedit {
namespace {

constexpr double kEmbeddingCostFloor = 1e-3;

std::vector<std::string> SplitCommas(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(Lowercase(item));
  }
  return out;
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

std::string_view PosTagName(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun: return "NOUN";
    case PosTag::kVerb: return "VERB";
    case PosTag::kAdj: return "ADJ";
    case PosTag::kAdv: return "ADV";
    case PosTag::kOther: return "OTHER";
  }
  return "OTHER";
}

PosTag ParsePosTag(std::string_view name) {
  const std::string upper = [&] {
    std::string s(name);
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  }();
  if (upper == "NOUN") return PosTag::kNoun;
  if (upper == "VERB") return PosTag::kVerb;
  if (upper == "ADJ") return PosTag::kAdj;
  if (upper == "ADV") return PosTag::kAdv;
  if (upper == "OTHER") return PosTag::kOther;
  throw ParseError("unknown POS tag '" + std::string(name) + "'");
}

Taxonomy Taxonomy::Load(std::istream& in) {
  Taxonomy tax;
  std::unordered_map<std::string, int> id_index;
  std::vector<std::pair<std::string, std::string>> hypers;
  std::vector<std::pair<std::string, std::string>> ants;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string kind, a, b, c;
    fields >> kind >> a >> b;
    const auto where = " (line " + std::to_string(line_no) + ")";
    if (kind == "synset") {
      if (a.empty() || b.empty()) throw ParseError("synset needs id and pos" + where);
      if (id_index.count(a)) throw ParseError("duplicate synset id " + a + where);
      fields >> c;
      Synset s{a, ParsePosTag(b), SplitCommas(c)};
      id_index[a] = static_cast<int>(tax.synsets_.size());
      tax.synsets_.push_back(std::move(s));
    } else if (kind == "hyper") {
      if (a.empty() || b.empty()) throw ParseError("hyper needs two ids" + where);
      hypers.emplace_back(a, b);
    } else if (kind == "ant") {
      if (a.empty() || b.empty()) throw ParseError("ant needs two words" + where);
      ants.emplace_back(Lowercase(a), Lowercase(b));
    } else {
      throw ParseError("unknown record '" + kind + "'" + where);
    }
  }

  const int count = tax.num_synsets();
  for (int i = 0; i < count; ++i) {
    for (const std::string& w : tax.synsets_[i].words) {
      auto& list = tax.word_synsets_[w];
      if (std::find(list.begin(), list.end(), i) == list.end()) list.push_back(i);
    }
  }

  std::vector<std::vector<int>> parents(count);
  for (const auto& [child, parent] : hypers) {
    const auto ci = id_index.find(child);
    const auto pi = id_index.find(parent);
    if (ci == id_index.end() || pi == id_index.end()) {
      throw ParseError("hyper references unknown synset " + child + " -> " + parent);
    }
    if (tax.synsets_[ci->second].pos != tax.synsets_[pi->second].pos) {
      throw ParseError("hyper crosses POS: " + child + " -> " + parent);
    }
    parents[ci->second].push_back(pi->second);
  }

  // Ancestor lists via BFS upward; a synset reaching itself is a cycle.
  tax.ancestors_.resize(count);
  tax.root_distance_.assign(count, 0);
  for (int s = 0; s < count; ++s) {
    std::vector<int> dist(count, -1);
    std::deque<int> queue{s};
    dist[s] = 0;
    int to_root = std::numeric_limits<int>::max();
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      if (parents[cur].empty()) to_root = std::min(to_root, dist[cur]);
      for (int p : parents[cur]) {
        if (p == s) throw ParseError("hypernym cycle through " + tax.synsets_[s].id);
        if (dist[p] < 0) {
          dist[p] = dist[cur] + 1;
          queue.push_back(p);
        }
      }
    }
    for (int k = 0; k < count; ++k) {
      if (dist[k] >= 0) tax.ancestors_[s].emplace_back(k, dist[k]);
    }
    tax.root_distance_[s] = to_root;
  }

  for (const auto& [a, b] : ants) {
    if (!tax.Contains(a) || !tax.Contains(b)) {
      throw ParseError("antonym link references unknown word: " + a + " / " + b);
    }
    bool same_pos = false;
    for (int sa : tax.SynsetsOf(a)) {
      for (int sb : tax.SynsetsOf(b)) {
        same_pos = same_pos || tax.synsets_[sa].pos == tax.synsets_[sb].pos;
      }
    }
    if (!same_pos) throw ParseError("antonym link crosses POS: " + a + " / " + b);
    auto add = [&](const std::string& x, const std::string& y) {
      auto& list = tax.antonyms_[x];
      if (std::find(list.begin(), list.end(), y) == list.end()) list.push_back(y);
    };
    add(a, b);
    add(b, a);
  }
  return tax;
}

Taxonomy Taxonomy::LoadFile(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return Load(in);
}

bool Taxonomy::Contains(std::string_view word) const {
  return word_synsets_.count(std::string(word)) > 0;
}

std::span<const int> Taxonomy::SynsetsOf(std::string_view word) const {
  const auto it = word_synsets_.find(std::string(word));
  if (it == word_synsets_.end()) return {};
  return it->second;
}

int Taxonomy::SynsetDistance(int a, int b) const {
  if (a == b) return 0;
  const AncestorList& la = ancestors_[a];
  const AncestorList& lb = ancestors_[b];
  int best = std::numeric_limits<int>::max();
  size_t i = 0;
  size_t j = 0;
  while (i < la.size() && j < lb.size()) {
    if (la[i].first < lb[j].first) {
      ++i;
    } else if (lb[j].first < la[i].first) {
      ++j;
    } else {
      best = std::min(best, la[i].second + lb[j].second);
      ++i;
      ++j;
    }
  }
  if (best == std::numeric_limits<int>::max()) {
    best = root_distance_[a] + 1 + root_distance_[b] + 1;
  }
  return best;
}

double Taxonomy::PathSimilarity(std::string_view a, std::string_view b) const {
  const std::span<const int> sa = SynsetsOf(a);
  const std::span<const int> sb = SynsetsOf(b);
  if (sa.empty()) throw UnknownWord("word not in taxonomy: " + std::string(a));
  if (sb.empty()) throw UnknownWord("word not in taxonomy: " + std::string(b));
  int best = std::numeric_limits<int>::max();
  for (int x : sa) {
    for (int y : sb) best = std::min(best, SynsetDistance(x, y));
  }
  return 1.0 / (1.0 + best);
}

std::vector<std::string> Taxonomy::Antonyms(std::string_view word) const {
  std::set<std::string> out;
  for (int s : SynsetsOf(word)) {
    for (const std::string& lemma : synsets_[s].words) {
      const auto it = antonyms_.find(lemma);
      if (it == antonyms_.end()) continue;
      out.insert(it->second.begin(), it->second.end());
    }
  }
  return {out.begin(), out.end()};
}

PosTag Taxonomy::Pos(std::string_view word) const {
  int counts[4] = {0, 0, 0, 0};
  for (int s : SynsetsOf(word)) {
    const PosTag tag = synsets_[s].pos;
    if (tag != PosTag::kOther) ++counts[static_cast<int>(tag)];
  }
  int best = -1;
  for (int k = 0; k < 4; ++k) {
    if (counts[k] > 0 && (best < 0 || counts[k] > counts[best])) best = k;
  }
  return best < 0 ? PosTag::kOther : static_cast<PosTag>(best);
}

EmbeddingTable EmbeddingTable::Load(std::istream& in) {
  EmbeddingTable table;
  long vocab = 0;
  if (!(in >> vocab >> table.dim_) || vocab < 0 || table.dim_ <= 0) {
    throw ParseError("embedding header must be '<vocab-size> <dim>'");
  }
  table.values_.reserve(static_cast<size_t>(vocab) * table.dim_);
  for (long row = 0; row < vocab; ++row) {
    std::string word;
    if (!(in >> word)) throw ParseError("embedding table truncated");
    word = Lowercase(word);
    if (table.index_.count(word)) throw ParseError("duplicate embedding word " + word);
    double norm = 0.0;
    for (int k = 0; k < table.dim_; ++k) {
      double x = 0.0;
      if (!(in >> x)) throw ParseError("embedding row for '" + word + "' is short");
      if (!std::isfinite(x)) throw ParseError("non-finite embedding value for " + word);
      table.values_.push_back(x);
      norm += x * x;
    }
    if (norm == 0.0) throw ParseError("zero embedding vector for " + word);
    table.index_.emplace(word, static_cast<int>(row));
    table.norms_.push_back(std::sqrt(norm));
  }
  return table;
}

EmbeddingTable EmbeddingTable::LoadFile(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return Load(in);
}

bool EmbeddingTable::Contains(std::string_view word) const {
  return index_.count(std::string(word)) > 0;
}

std::span<const double> EmbeddingTable::Vector(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) throw UnknownWord("word not in embedding table: " + std::string(word));
  return {values_.data() + static_cast<size_t>(it->second) * dim_,
          static_cast<size_t>(dim_)};
}

double EmbeddingTable::Cosine(std::string_view a, std::string_view b) const {
  const auto ia = index_.find(std::string(a));
  const auto ib = index_.find(std::string(b));
  if (ia == index_.end()) throw UnknownWord("word not in embedding table: " + std::string(a));
  if (ib == index_.end()) throw UnknownWord("word not in embedding table: " + std::string(b));
  if (ia->second == ib->second) return 1.0;
  const double* x = values_.data() + static_cast<size_t>(ia->second) * dim_;
  const double* y = values_.data() + static_cast<size_t>(ib->second) * dim_;
  double dot = 0.0;
  for (int k = 0; k < dim_; ++k) dot += x[k] * y[k];
  return std::clamp(dot / (norms_[ia->second] * norms_[ib->second]), -1.0, 1.0);
}

double PathSimilarity(const Taxonomy& taxonomy, std::string_view a,
                      std::string_view b) {
  return taxonomy.PathSimilarity(a, b);
}

double EmbeddingSimilarity(const EmbeddingTable& table, std::string_view a,
                           std::string_view b) {
  return table.Cosine(a, b);
}

PosTag TagPos(std::string_view token, const Taxonomy* taxonomy) {
  if (taxonomy == nullptr) return PosTag::kOther;
  return taxonomy->Pos(Lowercase(token));
}

void GraphBuildConfig::Validate() const {
  if (!(penalty_factor >= 1.0)) throw InvalidConfig("penalty_factor must be >= 1");
  if (pos_mode == PosMode::kSpecific && pos_tags.empty()) {
    throw InvalidConfig("POS-specific extraction needs at least one tag");
  }
}

std::vector<std::string> CandidateTargets(std::string_view word,
                                          const GraphBuildConfig& config,
                                          const Taxonomy* taxonomy,
                                          std::span<const std::string> sources) {
  if (config.targets == TargetMode::kAntonyms) {
    if (taxonomy == nullptr) return {};
    return taxonomy->Antonyms(word);
  }
  std::vector<std::string> out;
  for (const std::string& s : sources) {
    if (s != word) out.push_back(s);
  }
  return out;
}

double SimilarityToCost(double similarity, WeightSource source) {
  if (source == WeightSource::kTaxonomy) return similarity;
  return std::clamp((1.0 + similarity) / 2.0, kEmbeddingCostFloor, 1.0);
}

SubstitutionGraph BuildGraph(std::span<const Document> documents,
                             const GraphBuildConfig& config,
                             const Providers& providers, int jobs) {
  config.Validate();
  if (documents.empty()) throw EmptyGraph("no documents");
  const Taxonomy* tax = providers.taxonomy;
  const EmbeddingTable* emb = providers.embeddings;
  if (config.weights == WeightSource::kTaxonomy && tax == nullptr) {
    throw InvalidConfig("taxonomy weights need a taxonomy");
  }
  if (config.weights == WeightSource::kEmbedding && emb == nullptr) {
    throw InvalidConfig("embedding weights need an embedding table");
  }
  if (config.targets == TargetMode::kAntonyms && tax == nullptr) {
    throw InvalidConfig("antonym targets need a taxonomy");
  }
  if (config.pos_mode == PosMode::kSpecific && tax == nullptr) {
    throw InvalidConfig("POS-specific extraction needs a taxonomy for tagging");
  }

  auto weight_known = [&](const std::string& w) {
    return config.weights == WeightSource::kTaxonomy ? tax->Contains(w)
                                                     : emb->Contains(w);
  };

  SubstitutionGraph out;
  std::vector<std::string> sources;
  std::unordered_map<std::string, int> source_index;
  std::unordered_set<std::string> skipped;

  for (int d = 0; d < static_cast<int>(documents.size()); ++d) {
    const std::vector<Token> tokens = Tokenize(documents[d].text);
    for (int t = 0; t < static_cast<int>(tokens.size()); ++t) {
      if (!tokens[t].is_word) continue;
      const std::string& key = tokens[t].key;
      if (auto it = source_index.find(key); it != source_index.end()) {
        out.provenance[it->second].push_back({d, t});
        continue;
      }
      if (skipped.count(key)) continue;
      bool keep = weight_known(key);
      if (keep && config.pos_mode == PosMode::kSpecific) {
        const PosTag tag = tax->Pos(key);
        keep = std::find(config.pos_tags.begin(), config.pos_tags.end(), tag) !=
               config.pos_tags.end();
      }
      if (keep && config.targets == TargetMode::kAntonyms) {
        bool any = false;
        for (const std::string& a : tax->Antonyms(key)) any = any || weight_known(a);
        keep = any;
      }
      if (!keep) {
        skipped.insert(key);
        out.skipped_words.push_back(key);
        continue;
      }
      source_index.emplace(key, static_cast<int>(sources.size()));
      sources.push_back(key);
      out.provenance.push_back({{d, t}});
    }
  }

  std::vector<std::string> targets;
  if (config.targets == TargetMode::kCopyOfSource) {
    if (sources.size() == 1) {
      // The lone source has no candidate besides itself.
      out.skipped_words.push_back(sources.front());
      sources.clear();
      out.provenance.clear();
    }
    targets = sources;
  } else {
    std::set<std::string> pool;
    for (const std::string& s : sources) {
      for (const std::string& a : CandidateTargets(s, config, tax, sources)) {
        if (weight_known(a)) pool.insert(a);
      }
    }
    targets.assign(pool.begin(), pool.end());
    // Keep the graph rectangular with sources as the smaller side by falling
    // back to copy-of-source candidates for the shortfall.
    for (size_t k = 0; k < sources.size() && targets.size() < sources.size(); ++k) {
      if (!pool.count(sources[k])) targets.push_back(sources[k]);
    }
  }
  if (sources.empty()) throw EmptyGraph("no source words survive filtering");

  const int n = static_cast<int>(sources.size());
  const int m = static_cast<int>(targets.size());
  out.source_pos.resize(n);
  out.target_pos.resize(m);
  for (int i = 0; i < n; ++i) out.source_pos[i] = TagPos(sources[i], tax);
  for (int j = 0; j < m; ++j) out.target_pos[j] = TagPos(targets[j], tax);

  // Raw costs row by row; rows are independent so threads split them.
  std::vector<std::vector<double>> raw(n, std::vector<double>(m, kInfeasible));
  auto fill_rows = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      for (int j = 0; j < m; ++j) {
        if (sources[i] == targets[j]) continue;
        const double sim = config.weights == WeightSource::kTaxonomy
                               ? tax->PathSimilarity(sources[i], targets[j])
                               : emb->Cosine(sources[i], targets[j]);
        raw[i][j] = SimilarityToCost(sim, config.weights);
      }
    }
  };
  jobs = std::clamp(jobs, 1, std::max(1, n));
  if (jobs == 1) {
    fill_rows(0, n);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back(fill_rows, n * w / jobs, n * (w + 1) / jobs);
    }
    for (auto& t : workers) t.join();
  }

  auto cross_pos = [&](int i, int j) {
    return config.edge_filter && out.source_pos[i] != out.target_pos[j];
  };
  double max_plain = 0.0;
  double max_any = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (raw[i][j] == kInfeasible) continue;
      max_any = std::max(max_any, raw[i][j]);
      if (!cross_pos(i, j)) max_plain = std::max(max_plain, raw[i][j]);
    }
  }
  // Cross-POS edges all get one large weight, penalty_factor times the
  // heaviest same-POS edge of this graph.
  out.penalty_cost = config.penalty_factor * (max_plain > 0.0 ? max_plain : max_any);

  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (raw[i][j] == kInfeasible) continue;
      double w = raw[i][j];
      if (cross_pos(i, j)) {
        w = out.penalty_cost;
        ++out.penalized_edges;
      }
      edges.push_back({i, j, w});
    }
  }
  out.graph = BipartiteGraph(std::move(sources), std::move(targets), std::move(edges));
  return out;
}

}  // namespace cfedit
