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

// Evaluation metrics for counterfactual edits: flip-rate, minimality
// (normalized word-level Levenshtein), closeness (embedding-alignment F1)
// and fluency (|1 - loss ratio|), plus aggregate reporting.

#ifndef CFEDIT_METRICS_H_
#define CFEDIT_METRICS_H_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfedit/editor.h"
#include "cfedit/language_model.h"
#include "cfedit/lexicon.h"

namespace cfedit {

inline constexpr std::string_view kReportCsvHeader =
    "config,fluency,closeness,flip_rate,minimality,runtime_graph_s,runtime_solve_s,"
    "runtime_edit_s";

// Semantic similarity of two token sequences in [0,1].
class ClosenessScorer {
 public:
  virtual ~ClosenessScorer() = default;
  virtual double Score(std::span<const std::string> original,
                       std::span<const std::string> edited) const = 0;
};

// Greedy-alignment F1 over static word vectors: every token is matched to its
// most similar token on the other side (negative cosines count as 0).
// Out-of-vocabulary tokens only match an identical token and are left out of
// the average otherwise.
class EmbeddingCloseness : public ClosenessScorer {
 public:
  explicit EmbeddingCloseness(const EmbeddingTable& table) : table_(&table) {}
  double Score(std::span<const std::string> original,
               std::span<const std::string> edited) const override;

 private:
  const EmbeddingTable* table_;
};

// Fraction of flipped results. Throws EmptyInput.
double FlipRate(std::span<const EditResult> results);

int WordLevenshtein(std::span<const std::string> a, std::span<const std::string> b);
// Levenshtein(original, edited) / |original|, clamped to [0,1]. Throws EmptyInput.
double Minimality(std::span<const std::string> original,
                  std::span<const std::string> edited);
double Closeness(std::span<const std::string> original,
                 std::span<const std::string> edited, const EmbeddingTable& table);
// |1 - loss(edited) / loss(original)|. Throws DegenerateLoss when the
// original loss is zero.
double Fluency(std::span<const std::string> original,
               std::span<const std::string> edited, const LanguageScorer& scorer);

// Fills minimality/closeness/fluency of `result` from its texts.
void ScoreResult(EditResult& result, const ClosenessScorer& closeness,
                 const LanguageScorer& scorer);

struct MetricReport {
  std::string config;
  double fluency = 0.0;
  double closeness = 0.0;
  double flip_rate = 0.0;
  double minimality = 0.0;
  StageTimes runtime;
  int instances = 0;
  int failures = 0;
};

// Means of the per-instance metrics over results without errors; results
// whose metrics are still NaN are scored first. Throws EmptyInput.
MetricReport Aggregate(std::span<const EditResult> results,
                       const ClosenessScorer& closeness, const LanguageScorer& scorer,
                       const StageTimes& runtime, std::string config_name);

void WriteReportCsv(std::ostream& out, std::span<const MetricReport> reports);
void WriteReportJson(std::ostream& out, std::span<const MetricReport> reports);

}  // namespace cfedit

#endif  // CFEDIT_METRICS_H_
