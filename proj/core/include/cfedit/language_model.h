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

#ifndef CFEDIT_LANGUAGE_MODEL_H_
#define CFEDIT_LANGUAGE_MODEL_H_

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cfedit {

// Anything that assigns a per-token loss to a token sequence. The fluency
// heuristic and metric only ever see this interface, so a transformer
// scorer can replace the bundled bigram model.
class LanguageScorer {
 public:
  virtual ~LanguageScorer() = default;
  // Mean negative log-probability per token of `keys` (lowercased tokens).
  virtual double Loss(std::span<const std::string> keys) const = 0;
};

// Add-k smoothed bigram model with <s>/</s> boundaries and an <unk> class.
class BigramLanguageModel : public LanguageScorer {
 public:
  static BigramLanguageModel Train(std::span<const std::vector<std::string>> sentences,
                                   double add_k = 0.5);

  // log P(word | previous); unknown words map to <unk>.
  double LogProb(std::string_view previous, std::string_view word) const;
  // Averaged over the tokens plus the closing </s>.
  double Loss(std::span<const std::string> keys) const override;

  int vocabulary_size() const { return static_cast<int>(vocab_.size()); }
  double add_k() const { return add_k_; }

  static constexpr std::string_view kBegin = "<s>";
  static constexpr std::string_view kEnd = "</s>";
  static constexpr std::string_view kUnknown = "<unk>";

 private:
  std::string Canonical(std::string_view word) const;

  double add_k_ = 0.5;
  std::unordered_map<std::string, int> vocab_;
  std::unordered_map<std::string, double> history_counts_;
  std::unordered_map<std::string, double> bigram_counts_;  // "prev\tword"
};

}  // namespace cfedit

#endif  // CFEDIT_LANGUAGE_MODEL_H_
