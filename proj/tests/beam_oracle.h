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

// Brute-force reference for beam search: enumerates every subset of plan
// words that fits the substitution limit.

#ifndef CFEDIT_TESTS_BEAM_ORACLE_H_
#define CFEDIT_TESTS_BEAM_ORACLE_H_

#include <algorithm>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cfedit/classifier.h"
#include "cfedit/editor.h"
#include "cfedit/language_model.h"
#include "cfedit/text.h"
#include "json.hpp"

namespace cfedit::test {

struct OracleBest {
  bool found = false;
  std::vector<int> subset;  // indices of plan words in first-occurrence order
  std::vector<std::string> keys;
  double score = 0.0;
  bool flipped = false;
};

inline double OracleScore(const std::vector<std::string>& candidate,
                          const std::vector<std::string>& original, Heuristic mode,
                          const LanguageScorer* scorer, const TextClassifier& classifier,
                          int label) {
  if (mode == Heuristic::kFluency) return FluencyScore(candidate, original, scorer);
  return ContrastiveScore(candidate, original, label, &classifier);
}

// Supports the two heuristics whose scores do not depend on the other
// candidates of the same step.
inline OracleBest BruteForceBest(const std::string& text,
                                 const std::map<std::string, std::string>& plan,
                                 int limit, Heuristic mode, bool stop_on_flip,
                                 const LanguageScorer* scorer,
                                 const TextClassifier& classifier) {
  const std::vector<Token> tokens = Tokenize(text);
  const std::vector<std::string> original = TokenKeys(tokens);
  std::vector<std::string> words;
  std::vector<std::vector<int>> positions;
  for (int t = 0; t < static_cast<int>(tokens.size()); ++t) {
    if (!tokens[t].is_word || !plan.count(tokens[t].key)) continue;
    int w = 0;
    while (w < static_cast<int>(words.size()) && words[w] != tokens[t].key) ++w;
    if (w == static_cast<int>(words.size())) {
      words.push_back(tokens[t].key);
      positions.emplace_back();
    }
    positions[w].push_back(t);
  }
  const int label = classifier.PredictIndex(original);
  const int n = static_cast<int>(words.size());
  std::vector<OracleBest> all;
  for (int mask = 1; mask < (1 << n); ++mask) {
    OracleBest c;
    c.found = true;
    c.keys = original;
    int changed = 0;
    for (int w = 0; w < n; ++w) {
      if (!(mask >> w & 1)) continue;
      c.subset.push_back(w);
      changed += static_cast<int>(positions[w].size());
      for (int p : positions[w]) c.keys[p] = plan.at(words[w]);
    }
    if (changed > limit) continue;
    c.score = OracleScore(c.keys, original, mode, scorer, classifier, label);
    c.flipped = classifier.PredictIndex(c.keys) != label;
    all.push_back(std::move(c));
  }
  size_t min_flip_size = 1000;
  for (const OracleBest& c : all) {
    if (c.flipped) min_flip_size = std::min(min_flip_size, c.subset.size());
  }
  OracleBest best;
  for (const OracleBest& c : all) {
    if (stop_on_flip && c.flipped && c.subset.size() != min_flip_size) continue;
    const bool better =
        !best.found || (c.flipped && !best.flipped) ||
        (c.flipped == best.flipped &&
         (c.score > best.score || (c.score == best.score && c.subset < best.subset)));
    if (better) best = c;
  }
  return best;
}

inline std::map<std::string, std::string> ReadPlanTsv(const std::string& path) {
  std::map<std::string, std::string> plan;
  std::ifstream in(path);
  std::string source, target;
  while (in >> source >> target) plan.emplace(source, target);
  return plan;
}

inline SubstitutionPlan ToPlan(const std::map<std::string, std::string>& pairs) {
  std::vector<PlannedSubstitution> out;
  for (const auto& [s, t] : pairs) out.push_back({s, t, 0.0});
  return SubstitutionPlan(std::move(out));
}

inline std::vector<Document> ReadDocuments(const std::string& path) {
  std::vector<Document> docs;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json row = nlohmann::json::parse(line);
    docs.push_back({row.at("id").get<std::string>(), row.at("text").get<std::string>()});
  }
  return docs;
}

}  // namespace cfedit::test

#endif  // CFEDIT_TESTS_BEAM_ORACLE_H_
