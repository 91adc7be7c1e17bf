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

// Multinomial naive Bayes over bag-of-words counts: the black-box predictor
// that counterfactual edits are evaluated against.

#ifndef CFEDIT_CLASSIFIER_H_
#define CFEDIT_CLASSIFIER_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cfedit {

struct LabeledInstance {
  std::string id;
  std::string text;
  std::string label;
};

struct LabeledDataset {
  std::vector<LabeledInstance> instances;
  std::vector<std::string> label_set;  // ordered; defines label indices

  // Throws DegenerateDataset when ids repeat, texts are empty or labels fall
  // outside label_set.
  void Validate() const;
};

// One JSON object per line with "id", "text" and "label". label_set is the
// sorted set of labels seen. Throws ParseError.
LabeledDataset ReadJsonLines(std::istream& in);
LabeledDataset ReadJsonLinesFile(const std::filesystem::path& path);

class TextClassifier {
 public:
  // Throws DegenerateDataset for fewer than two populated classes and
  // InvalidConfig for smoothing <= 0.
  static TextClassifier Train(const LabeledDataset& data, double smoothing = 1.0);

  const std::vector<std::string>& labels() const { return labels_; }
  int num_labels() const { return static_cast<int>(labels_.size()); }
  int vocabulary_size() const { return static_cast<int>(vocab_.size()); }
  double smoothing() const { return smoothing_; }

  // Posterior over labels() for a lowercased token sequence (word tokens;
  // punctuation keys are ignored).
  std::vector<double> PredictProba(std::span<const std::string> keys) const;
  std::vector<double> PredictProba(std::string_view text) const;
  // Argmax of PredictProba; ties go to the earliest label.
  int PredictIndex(std::span<const std::string> keys) const;
  const std::string& PredictLabel(std::string_view text) const;

  // Per-class log P(word | class), smoothing-only mass for unseen words.
  double LogLikelihood(int label, std::string_view word) const;
  double LogPrior(int label) const { return log_priors_[label]; }

  // Versioned text format: header, labels, priors, then one line per word.
  void Save(std::ostream& out) const;
  static TextClassifier Load(std::istream& in);

  bool operator==(const TextClassifier&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> log_priors_;
  std::vector<double> class_totals_;  // token count per class
  double smoothing_ = 1.0;
  // word -> per-class token counts
  std::unordered_map<std::string, std::vector<double>> vocab_;
};

}  // namespace cfedit

#endif  // CFEDIT_CLASSIFIER_H_
