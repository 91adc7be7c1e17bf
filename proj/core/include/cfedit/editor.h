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

// Third pipeline stage: given solver-selected substitution pairs, choose the
// actual word edits per document with beam search under a substitution
// limit, stopping as soon as the classifier's prediction flips.

#ifndef CFEDIT_EDITOR_H_
#define CFEDIT_EDITOR_H_

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cfedit/assignment.h"
#include "cfedit/classifier.h"
#include "cfedit/gnn.h"
#include "cfedit/language_model.h"
#include "cfedit/lexicon.h"
#include "cfedit/text.h"

namespace cfedit {

enum class Heuristic { kFluency, kContrastive, kFluencyContrastive };

std::string_view HeuristicName(Heuristic h);
// "fluency", "contrastive", "fluency_contrastive". Throws ParseError.
Heuristic ParseHeuristic(std::string_view name);

struct ThresholdMode {
  enum class Kind { kStatic, kDynamic };
  Kind kind = Kind::kStatic;
  int count = 10;          // static limit
  double fraction = 0.20;  // dynamic share of the word count

  static ThresholdMode Static(int k) { return {Kind::kStatic, k, 0.20}; }
  static ThresholdMode Dynamic(double f) { return {Kind::kDynamic, 10, f}; }
};

// "static:10" or "dynamic:0.2". Throws ParseError.
ThresholdMode ParseThreshold(std::string_view text);
std::string FormatThreshold(const ThresholdMode& mode);

struct EditConfig {
  Heuristic heuristic = Heuristic::kFluency;
  ThresholdMode threshold;
  int beam_width = 5;
  bool stop_on_flip = true;

  // Throws InvalidConfig.
  void Validate() const;
};

struct PlannedSubstitution {
  std::string source;
  std::string target;
  double cost = 0.0;
};

// One target per source word, taken from a matching over the corpus graph.
class SubstitutionPlan {
 public:
  SubstitutionPlan() = default;
  explicit SubstitutionPlan(std::vector<PlannedSubstitution> pairs);
  static SubstitutionPlan FromMatching(const SubstitutionGraph& graph,
                                       const Matching& matching);

  const std::vector<PlannedSubstitution>& pairs() const { return pairs_; }
  // Null when `word` has no planned substitution.
  const PlannedSubstitution* Find(std::string_view word) const;
  int size() const { return static_cast<int>(pairs_.size()); }

  // Provenance of each source word (document, token), when built from a graph.
  const std::unordered_map<std::string, std::vector<Occurrence>>& provenance() const {
    return provenance_;
  }

 private:
  std::vector<PlannedSubstitution> pairs_;
  std::unordered_map<std::string, int> index_;
  std::unordered_map<std::string, std::vector<Occurrence>> provenance_;
};

struct AppliedSubstitution {
  int position = 0;  // token index
  std::string source;
  std::string target;

  bool operator==(const AppliedSubstitution&) const = default;
};

struct EditResult {
  std::string id;
  std::string original_text;
  std::string edited_text;
  std::vector<AppliedSubstitution> applied;
  std::string original_label;
  double original_probability = 0.0;
  std::string edited_label;
  double edited_probability = 0.0;
  bool flipped = false;
  std::vector<double> heuristic_trace;  // best score after each step
  int substitution_limit = 0;
  // No plan word occurs in the document, so nothing could be substituted.
  bool controllability_exception = false;
  // Set when editing this document failed; the batch carries on.
  std::string error;
  // Per-instance metrics, NaN until scored.
  double minimality = std::numeric_limits<double>::quiet_NaN();
  double closeness = std::numeric_limits<double>::quiet_NaN();
  double fluency = std::numeric_limits<double>::quiet_NaN();
};

// STATIC -> k; DYNAMIC -> max(1, floor(fraction * word count)).
int SubstitutionLimit(std::span<const Token> tokens, const EditConfig& config);
int SubstitutionLimit(std::string_view text, const EditConfig& config);

// -|1 - loss(candidate) / loss(original)|. Throws ScorerUnavailable,
// DegenerateLoss.
double FluencyScore(std::span<const std::string> candidate,
                    std::span<const std::string> original, const LanguageScorer* scorer);
// P(label | original) - P(label | candidate). Throws ScorerUnavailable.
double ContrastiveScore(std::span<const std::string> candidate,
                        std::span<const std::string> original, int label,
                        const TextClassifier* classifier);

// Scores a candidate set under `mode`. The combined heuristic min-max
// normalizes each component across `candidates` (a constant component
// normalizes to 1) and averages the two. `label` is the original prediction.
std::vector<double> ScoreCandidates(std::span<const std::vector<std::string>> candidates,
                                    std::span<const std::string> original, Heuristic mode,
                                    const LanguageScorer* scorer,
                                    const TextClassifier* classifier, int label);
double HeuristicScore(std::span<const std::string> candidate,
                      std::span<const std::string> original, Heuristic mode,
                      const LanguageScorer* scorer, const TextClassifier* classifier);

// Beam search over sets of applied plan substitutions. A plan word is
// replaced at all of its occurrences in one step, and a state may change at
// most SubstitutionLimit() positions. Throws ScorerUnavailable when the
// classifier (or the scorer a heuristic needs) is missing.
EditResult BeamSearchEdit(const Document& document, const SubstitutionPlan& plan,
                          const EditConfig& config, const LanguageScorer* scorer,
                          const TextClassifier* classifier);

enum class SolverKind { kDeterministic, kGnn };

struct SolverChoice {
  SolverKind kind = SolverKind::kDeterministic;
  const GnnModel* model = nullptr;    // required for kGnn
  const GnnConfig* config = nullptr;  // required for kGnn
};

struct StageTimes {
  double graph_s = 0.0;
  double solve_s = 0.0;
  double edit_s = 0.0;
};

struct DatasetEdit {
  std::vector<EditResult> results;
  StageTimes times;
  SubstitutionPlan plan;
  int graph_sources = 0;
  int graph_targets = 0;
  double matching_weight = 0.0;
  int failures = 0;
};

// Graph construction -> RLAP solve -> per-document beam search. When
// `scorer` is null a bigram model is trained on the documents. Failed
// documents keep their error string instead of aborting the batch; `jobs`
// documents are edited in parallel without changing the output.
DatasetEdit EditDataset(std::span<const Document> documents,
                        const GraphBuildConfig& graph_config, const SolverChoice& solver,
                        const EditConfig& edit_config, const Providers& providers,
                        const TextClassifier& classifier,
                        const LanguageScorer* scorer = nullptr, int jobs = 1);

// Bigram model over the token keys of `documents`.
BigramLanguageModel TrainCorpusLanguageModel(std::span<const Document> documents);

// Solves a built graph with the chosen solver.
Matching SolveSubstitutionGraph(const SubstitutionGraph& graph, const SolverChoice& solver);

// JSON-lines persistence of edit results. The reader skips blank lines and
// lines starting with '#'.
void WriteEditResult(std::ostream& out, const EditResult& result);
std::vector<EditResult> ReadEditResults(std::istream& in);

}  // namespace cfedit

#endif  // CFEDIT_EDITOR_H_
