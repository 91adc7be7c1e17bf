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

#include "cfedit/classifier.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cfedit/errors.h"
#include "cfedit/language_model.h"
#include "cfedit/text.h"
#include "gtest/gtest.h"
#include "test_paths.h"

namespace cfedit {
namespace {

LabeledDataset GoodBad() {
  LabeledDataset data;
  data.instances = {{"1", "good movie", "A"},
                    {"2", "good fun", "A"},
                    {"3", "bad movie", "B"},
                    {"4", "bad plot", "B"}};
  data.label_set = {"A", "B"};
  return data;
}

TEST(ReadJsonLinesTest, ParsesAndOrdersLabels) {
  std::istringstream in(
      "{\"id\": \"x\", \"text\": \"Nice one\", \"label\": \"pos\"}\n"
      "\n"
      "{\"id\": \"y\", \"text\": \"Awful\", \"label\": \"neg\"}\n");
  const LabeledDataset data = ReadJsonLines(in);
  ASSERT_EQ(data.instances.size(), 2u);
  EXPECT_EQ(data.instances[1].text, "Awful");
  EXPECT_EQ(data.label_set, (std::vector<std::string>{"neg", "pos"}));
}

TEST(ReadJsonLinesTest, RejectsBadRows) {
  std::istringstream missing("{\"id\": \"x\", \"text\": \"t\"}\n");
  EXPECT_THROW(ReadJsonLines(missing), ParseError);
  std::istringstream broken("{not json\n");
  EXPECT_THROW(ReadJsonLines(broken), ParseError);
  std::istringstream dup(
      "{\"id\": \"x\", \"text\": \"a\", \"label\": \"p\"}\n"
      "{\"id\": \"x\", \"text\": \"b\", \"label\": \"q\"}\n");
  EXPECT_THROW(ReadJsonLines(dup).Validate(), DegenerateDataset);
}

TEST(TextClassifierTest, HandComputedPosterior) {
  const TextClassifier clf = TextClassifier::Train(GoodBad());
  // Vocabulary {good, movie, fun, bad, plot}, four tokens per class, add-one:
  // P(good|A)=3/9, P(movie|A)=2/9, P(good|B)=1/9, P(movie|B)=2/9.
  const std::vector<double> p = clf.PredictProba(std::string_view("good movie"));
  EXPECT_NEAR(p[0], 0.75, 1e-12);
  EXPECT_NEAR(p[1], 0.25, 1e-12);
  EXPECT_EQ(clf.PredictLabel("Good movie!"), "A");
  EXPECT_NEAR(clf.LogLikelihood(0, "good"), std::log(3.0 / 9.0), 1e-12);
  EXPECT_NEAR(clf.LogLikelihood(1, "unseen"), std::log(1.0 / 9.0), 1e-12);
  EXPECT_EQ(clf.vocabulary_size(), 5);
}

TEST(TextClassifierTest, EmptyTextGivesPriors) {
  LabeledDataset data = GoodBad();
  data.instances.push_back({"5", "fun fun", "A"});
  const TextClassifier clf = TextClassifier::Train(data);
  const std::vector<double> p = clf.PredictProba(std::string_view(""));
  EXPECT_NEAR(p[0], 0.6, 1e-12);
  EXPECT_NEAR(p[1], 0.4, 1e-12);
  EXPECT_NEAR(std::exp(clf.LogPrior(0)), 0.6, 1e-12);
}

TEST(TextClassifierTest, TieGoesToFirstLabel) {
  const TextClassifier clf = TextClassifier::Train(GoodBad());
  EXPECT_EQ(clf.PredictLabel("movie"), "A");
  EXPECT_EQ(clf.PredictLabel("good bad"), "A");
}

TEST(TextClassifierTest, DegenerateInputs) {
  LabeledDataset single = GoodBad();
  single.label_set = {"A"};
  single.instances.resize(2);
  EXPECT_THROW(TextClassifier::Train(single), DegenerateDataset);
  LabeledDataset empty_class = GoodBad();
  empty_class.label_set = {"A", "B", "C"};
  EXPECT_THROW(TextClassifier::Train(empty_class), DegenerateDataset);
  EXPECT_THROW(TextClassifier::Train(GoodBad(), 0.0), InvalidConfig);
}

TEST(TextClassifierTest, DeterministicRetraining) {
  EXPECT_EQ(TextClassifier::Train(GoodBad()), TextClassifier::Train(GoodBad()));
}

TEST(TextClassifierTest, SaveLoadRoundTrip) {
  const TextClassifier clf = TextClassifier::Train(GoodBad(), 0.5);
  std::stringstream buffer;
  clf.Save(buffer);
  const TextClassifier back = TextClassifier::Load(buffer);
  EXPECT_EQ(back, clf);
  std::stringstream bad("cfedit-nb 7\n");
  EXPECT_THROW(TextClassifier::Load(bad), ParseError);
}

class BundledCorpusTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    data_ = new LabeledDataset(ReadJsonLinesFile(test::DataPath("sentiment.jsonl")));
    clf_ = new TextClassifier(TextClassifier::Train(*data_));
  }
  static void TearDownTestSuite() {
    delete clf_;
    delete data_;
  }
  static LabeledDataset* data_;
  static TextClassifier* clf_;
};
LabeledDataset* BundledCorpusTest::data_ = nullptr;
TextClassifier* BundledCorpusTest::clf_ = nullptr;

TEST_F(BundledCorpusTest, ProbabilitiesNormalizeAndLabelsClose) {
  for (const LabeledInstance& inst : data_->instances) {
    const std::vector<double> p = clf_->PredictProba(std::string_view(inst.text));
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
    const std::string& label = clf_->PredictLabel(inst.text);
    EXPECT_NE(std::find(data_->label_set.begin(), data_->label_set.end(), label),
              data_->label_set.end());
  }
}

TEST_F(BundledCorpusTest, BagOfWordsIsOrderInvariant) {
  for (size_t k = 0; k < 40; ++k) {
    std::vector<std::string> keys = WordKeys(Tokenize(data_->instances[k].text));
    const std::vector<double> before = clf_->PredictProba(keys);
    std::reverse(keys.begin(), keys.end());
    const std::vector<double> after = clf_->PredictProba(keys);
    EXPECT_NEAR(before[0], after[0], 1e-12);
  }
}

TEST_F(BundledCorpusTest, NegativeEvidenceNeverRaisesPositive) {
  const auto& labels = clf_->labels();
  const int pos = static_cast<int>(std::find(labels.begin(), labels.end(), "positive") -
                                   labels.begin());
  const int neg = 1 - pos;
  ASSERT_GT(clf_->LogLikelihood(neg, "terrible"), clf_->LogLikelihood(pos, "terrible"));
  for (size_t k = 0; k < 40; ++k) {
    std::vector<std::string> keys = WordKeys(Tokenize(data_->instances[k].text));
    const double before = clf_->PredictProba(keys)[pos];
    keys.push_back("terrible");
    EXPECT_LE(clf_->PredictProba(keys)[pos], before);
  }
}

TEST_F(BundledCorpusTest, FitsTheTrainingCorpus) {
  int correct = 0;
  for (const LabeledInstance& inst : data_->instances) {
    correct += clf_->PredictLabel(inst.text) == inst.label ? 1 : 0;
  }
  EXPECT_GE(correct, static_cast<int>(0.95 * data_->instances.size()));
}

TEST(BigramLanguageModelTest, HandComputedLoss) {
  const std::vector<std::vector<std::string>> corpus = {{"a", "b"}, {"a", "c"}};
  const BigramLanguageModel lm = BigramLanguageModel::Train(corpus, 0.5);
  // Vocabulary {a, b, c, </s>, <unk>}; histories <s>:2, a:2, b:1, c:1.
  EXPECT_EQ(lm.vocabulary_size(), 5);
  EXPECT_NEAR(lm.LogProb("<s>", "a"), std::log(2.5 / 4.5), 1e-12);
  const std::vector<std::string> ab = {"a", "b"};
  const double expected = -(std::log(2.5 / 4.5) + std::log(1.5 / 4.5) + std::log(1.5 / 3.5)) / 3;
  EXPECT_NEAR(lm.Loss(ab), expected, 1e-12);
  const std::vector<std::string> unknown = {"zzz"};
  // Unknown words fall back to <unk>, which was never observed.
  const double unk = -(std::log(0.5 / 4.5) + std::log(0.5 / 2.5)) / 2;
  EXPECT_NEAR(lm.Loss(unknown), unk, 1e-12);
  EXPECT_THROW(BigramLanguageModel::Train(corpus, 0.0), InvalidConfig);
}

}  // namespace
}  // namespace cfedit
