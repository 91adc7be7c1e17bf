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
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cfedit/editor.h"
#include "cfedit/errors.h"
#include "cfedit/language_model.h"
#include "cfedit/lexicon.h"
#include "cfedit/text.h"
#include "gtest/gtest.h"
#include "test_paths.h"

namespace cfedit {
namespace {

using Keys = std::vector<std::string>;

// Full-matrix edit distance, written independently of the rolling version.
int ReferenceLevenshtein(const Keys& a, const Keys& b) {
  std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1));
  for (size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

Keys RandomKeys(std::mt19937& rng, int max_len) {
  Keys out(rng() % (max_len + 1));
  for (std::string& k : out) k = std::string(1, static_cast<char>('a' + rng() % 4));
  return out;
}

EmbeddingTable TinyTable() {
  std::istringstream in("4 2\na 1 0\nb 0 1\nc 1 1\nd -1 0\n");
  return EmbeddingTable::Load(in);
}

class ConstantScorer : public LanguageScorer {
 public:
  explicit ConstantScorer(double loss) : loss_(loss) {}
  double Loss(std::span<const std::string>) const override { return loss_; }

 private:
  double loss_;
};

TEST(LevenshteinTest, KnownDistances) {
  EXPECT_EQ(WordLevenshtein(Keys{"a", "b", "c"}, Keys{"a", "c"}), 1);
  EXPECT_EQ(WordLevenshtein(Keys{}, Keys{"x", "y"}), 2);
  EXPECT_EQ(WordLevenshtein(Keys{"the", "cat", "sat"}, Keys{"sat", "the", "cat"}), 2);
}

TEST(LevenshteinTest, MatchesReferenceAndIsAMetric) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const Keys a = RandomKeys(rng, 7);
    const Keys b = RandomKeys(rng, 7);
    const Keys c = RandomKeys(rng, 7);
    const int ab = WordLevenshtein(a, b);
    EXPECT_EQ(ab, ReferenceLevenshtein(a, b));
    EXPECT_EQ(ab, WordLevenshtein(b, a));
    EXPECT_EQ(WordLevenshtein(a, a), 0);
    EXPECT_LE(WordLevenshtein(a, c), ab + WordLevenshtein(b, c));
    EXPECT_LE(ab, static_cast<int>(std::max(a.size(), b.size())));
  }
}

TEST(MinimalityTest, OneWordInAHundred) {
  Keys original;
  for (int i = 0; i < 100; ++i) original.push_back("w" + std::to_string(i));
  Keys edited = original;
  edited[37] = "changed";
  EXPECT_EQ(Minimality(original, edited), 0.01);
  EXPECT_EQ(Minimality(original, original), 0.0);
  EXPECT_THROW(Minimality(Keys{}, edited), EmptyInput);
  EXPECT_EQ(Minimality(Keys{"a"}, Keys{"b", "c", "d"}), 1.0);
}

TEST(FluencyTest, Definition) {
  const std::vector<std::vector<std::string>> corpus = {{"a", "good", "movie"},
                                                        {"a", "bad", "movie"}};
  const BigramLanguageModel lm = BigramLanguageModel::Train(corpus);
  const Keys o = {"a", "good", "movie"};
  const Keys e = {"a", "movie", "good"};
  EXPECT_EQ(Fluency(o, o, lm), 0.0);
  EXPECT_DOUBLE_EQ(Fluency(o, e, lm), std::abs(1.0 - lm.Loss(e) / lm.Loss(o)));
  EXPECT_THROW(Fluency(o, e, ConstantScorer(0.0)), DegenerateLoss);
}

TEST(ClosenessTest, IdenticalTextsScoreOne) {
  const EmbeddingTable table = EmbeddingTable::LoadFile(test::DataPath("embeddings.txt"));
  const Keys text = TokenKeys(Tokenize("The movie was good, and the acting was fine."));
  EXPECT_NEAR(Closeness(text, text, table), 1.0, 1e-9);
}

TEST(ClosenessTest, HandComputedAlignment) {
  const EmbeddingTable table = TinyTable();
  // Each side aligns one token exactly and the other at cosine 1/sqrt(2).
  const double expected = 0.5 * (1.0 + 1.0 / std::sqrt(2.0));
  EXPECT_NEAR(Closeness(Keys{"a", "b"}, Keys{"a", "c"}, table), expected, 1e-12);
  EXPECT_NEAR(Closeness(Keys{"a", "b", ","}, Keys{"a", "c", ","}, table),
              (2.0 + 1.0 / std::sqrt(2.0)) / 3.0, 1e-12);
  EXPECT_NEAR(Closeness(Keys{"a", "zz"}, Keys{"a"}, table), 1.0, 1e-12);
}

TEST(ClosenessTest, Edges) {
  const EmbeddingTable table = TinyTable();
  EXPECT_EQ(Closeness(Keys{"a"}, Keys{"d"}, table), 0.0);
  EXPECT_EQ(Closeness(Keys{"zz"}, Keys{"yy"}, table), 0.0);
  EXPECT_EQ(Closeness(Keys{}, Keys{"a"}, table), 0.0);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Keys a = RandomKeys(rng, 5);
    const Keys b = RandomKeys(rng, 5);
    const double s = Closeness(a, b, table);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(s, Closeness(b, a, table), 1e-12);
  }
}

EditResult Result(bool flipped) {
  EditResult r;
  r.original_text = "a good movie";
  r.edited_text = flipped ? "a bad movie" : "a good movie";
  r.flipped = flipped;
  return r;
}

TEST(FlipRateTest, Arithmetic) {
  const std::vector<EditResult> results = {Result(true), Result(false), Result(true),
                                           Result(false), Result(false)};
  EXPECT_EQ(FlipRate(results), 0.4);
  EXPECT_THROW(FlipRate(std::vector<EditResult>{}), EmptyInput);
}

TEST(AggregateTest, MeansAndFailures) {
  const EmbeddingTable table = TinyTable();
  const EmbeddingCloseness closeness(table);
  const ConstantScorer lm(2.0);
  std::vector<EditResult> results = {Result(true), Result(false), Result(true)};
  results[1].error = "boom";
  const MetricReport report =
      Aggregate(results, closeness, lm, StageTimes{1.0, -2.0, NAN}, "cfg");
  EXPECT_EQ(report.instances, 2);
  EXPECT_EQ(report.failures, 1);
  EXPECT_EQ(report.flip_rate, 1.0);
  EXPECT_NEAR(report.minimality, 1.0 / 3.0, 1e-12);
  EXPECT_EQ(report.fluency, 0.0);
  EXPECT_EQ(report.runtime.solve_s, 0.0);
  EXPECT_EQ(report.runtime.edit_s, 0.0);
  std::vector<EditResult> broken = {results[1]};
  EXPECT_THROW(Aggregate(broken, closeness, lm, StageTimes{}, "x"), EmptyInput);
}

TEST(ReportTest, CsvLayout) {
  MetricReport r;
  r.config = "det-fluency";
  r.fluency = 0.5;
  r.flip_rate = 1.0;
  std::ostringstream out;
  WriteReportCsv(out, std::vector<MetricReport>{r});
  EXPECT_EQ(out.str(),
            "config,fluency,closeness,flip_rate,minimality,runtime_graph_s,"
            "runtime_solve_s,runtime_edit_s\n"
            "det-fluency,0.500000,0.000000,1.000000,0.000000,0.000000,0.000000,0.000000\n");
  std::ostringstream json;
  WriteReportJson(json, std::vector<MetricReport>{r});
  EXPECT_NE(json.str().find("\"flip_rate\": 1.0"), std::string::npos);
}

}  // namespace
}  // namespace cfedit
