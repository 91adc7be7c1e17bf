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

#include "cfedit/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "cfedit/errors.h"
#include "cfedit/text.h"
#include "json.hpp"

namespace cfedit {
namespace {

// Mean over `from` of the best similarity to any token of `to`. Returns
// false when no token of `from` could be scored.
bool AlignmentMean(std::span<const std::string> from, std::span<const std::string> to,
                   const EmbeddingTable& table, double* mean) {
  double sum = 0.0;
  int count = 0;
  for (const std::string& a : from) {
    const bool a_known = table.Contains(a);
    bool scored = false;
    double best = 0.0;
    for (const std::string& b : to) {
      if (a == b) {
        best = 1.0;
        scored = true;
        break;
      }
      if (a_known && table.Contains(b)) {
        best = std::max(best, std::clamp(table.Cosine(a, b), 0.0, 1.0));
      }
    }
    if (a_known || scored) {
      sum += best;
      ++count;
    }
  }
  if (count == 0) return false;
  *mean = sum / count;
  return true;
}

double CleanTime(double x) { return std::isfinite(x) && x > 0.0 ? x : 0.0; }

}  // namespace

double EmbeddingCloseness::Score(std::span<const std::string> original,
                                 std::span<const std::string> edited) const {
  return Closeness(original, edited, *table_);
}

double FlipRate(std::span<const EditResult> results) {
  if (results.empty()) throw EmptyInput("flip rate of no results");
  const auto flipped = std::count_if(results.begin(), results.end(),
                                     [](const EditResult& r) { return r.flipped; });
  return static_cast<double>(flipped) / static_cast<double>(results.size());
}

int WordLevenshtein(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<int> prev(b.size() + 1);
  std::vector<int> cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double Minimality(std::span<const std::string> original,
                  std::span<const std::string> edited) {
  if (original.empty()) throw EmptyInput("minimality of an empty original");
  const double d = WordLevenshtein(original, edited);
  return std::clamp(d / static_cast<double>(original.size()), 0.0, 1.0);
}

double Closeness(std::span<const std::string> original,
                 std::span<const std::string> edited, const EmbeddingTable& table) {
  double recall = 0.0;
  double precision = 0.0;
  if (!AlignmentMean(original, edited, table, &recall) ||
      !AlignmentMean(edited, original, table, &precision)) {
    return 0.0;
  }
  if (recall + precision <= 0.0) return 0.0;
  return std::clamp(2.0 * recall * precision / (recall + precision), 0.0, 1.0);
}

double Fluency(std::span<const std::string> original,
               std::span<const std::string> edited, const LanguageScorer& scorer) {
  const double base = scorer.Loss(original);
  if (!(base > 0.0)) throw DegenerateLoss("original text has zero language-model loss");
  return std::abs(1.0 - scorer.Loss(edited) / base);
}

void ScoreResult(EditResult& result, const ClosenessScorer& closeness,
                 const LanguageScorer& scorer) {
  const std::vector<std::string> original = TokenKeys(Tokenize(result.original_text));
  const std::vector<std::string> edited = TokenKeys(Tokenize(result.edited_text));
  result.minimality = Minimality(original, edited);
  result.closeness = closeness.Score(original, edited);
  result.fluency = Fluency(original, edited, scorer);
}

MetricReport Aggregate(std::span<const EditResult> results,
                       const ClosenessScorer& closeness, const LanguageScorer& scorer,
                       const StageTimes& runtime, std::string config_name) {
  if (results.empty()) throw EmptyInput("nothing to aggregate");
  MetricReport report;
  report.config = std::move(config_name);
  report.runtime = {CleanTime(runtime.graph_s), CleanTime(runtime.solve_s),
                    CleanTime(runtime.edit_s)};
  int flipped = 0;
  for (const EditResult& r : results) {
    if (!r.error.empty()) {
      ++report.failures;
      continue;
    }
    EditResult scored = r;
    if (std::isnan(scored.minimality) || std::isnan(scored.closeness) ||
        std::isnan(scored.fluency)) {
      ScoreResult(scored, closeness, scorer);
    }
    report.minimality += scored.minimality;
    report.closeness += scored.closeness;
    report.fluency += scored.fluency;
    flipped += scored.flipped ? 1 : 0;
    ++report.instances;
  }
  if (report.instances == 0) throw EmptyInput("every result failed");
  const double n = report.instances;
  report.minimality = std::clamp(report.minimality / n, 0.0, 1.0);
  report.closeness = std::clamp(report.closeness / n, 0.0, 1.0);
  report.fluency = std::max(0.0, report.fluency / n);
  report.flip_rate = flipped / n;
  return report;
}

void WriteReportCsv(std::ostream& out, std::span<const MetricReport> reports) {
  out << kReportCsvHeader << '\n';
  char buf[512];
  for (const MetricReport& r : reports) {
    std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", r.fluency,
                  r.closeness, r.flip_rate, r.minimality, r.runtime.graph_s,
                  r.runtime.solve_s, r.runtime.edit_s);
    out << r.config << buf << '\n';
  }
}

void WriteReportJson(std::ostream& out, std::span<const MetricReport> reports) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const MetricReport& r : reports) {
    nlohmann::ordered_json row;
    row["config"] = r.config;
    row["fluency"] = r.fluency;
    row["closeness"] = r.closeness;
    row["flip_rate"] = r.flip_rate;
    row["minimality"] = r.minimality;
    row["runtime_graph_s"] = r.runtime.graph_s;
    row["runtime_solve_s"] = r.runtime.solve_s;
    row["runtime_edit_s"] = r.runtime.edit_s;
    row["instances"] = r.instances;
    row["failures"] = r.failures;
    rows.push_back(std::move(row));
  }
  out << rows.dump(2) << '\n';
}

}  // namespace cfedit
