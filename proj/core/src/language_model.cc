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

#include "cfedit/language_model.h"

#include <cmath>

#include "cfedit/errors.h"

namespace cfedit {

BigramLanguageModel BigramLanguageModel::Train(
    std::span<const std::vector<std::string>> sentences, double add_k) {
  if (!(add_k > 0.0)) throw InvalidConfig("add_k must be positive");
  BigramLanguageModel lm;
  lm.add_k_ = add_k;
  for (const auto& sentence : sentences) {
    for (const std::string& w : sentence) lm.vocab_.emplace(w, 0);
  }
  lm.vocab_.emplace(std::string(kEnd), 0);
  lm.vocab_.emplace(std::string(kUnknown), 0);
  for (const auto& sentence : sentences) {
    std::string prev(kBegin);
    for (const std::string& w : sentence) {
      lm.history_counts_[prev] += 1.0;
      lm.bigram_counts_[prev + '\t' + w] += 1.0;
      prev = w;
    }
    lm.history_counts_[prev] += 1.0;
    lm.bigram_counts_[prev + '\t' + std::string(kEnd)] += 1.0;
  }
  return lm;
}

std::string BigramLanguageModel::Canonical(std::string_view word) const {
  if (word == kBegin || vocab_.count(std::string(word))) return std::string(word);
  return std::string(kUnknown);
}

double BigramLanguageModel::LogProb(std::string_view previous, std::string_view word) const {
  const std::string prev = Canonical(previous);
  const std::string cur = Canonical(word);
  const auto h = history_counts_.find(prev);
  const auto b = bigram_counts_.find(prev + '\t' + cur);
  const double history = h == history_counts_.end() ? 0.0 : h->second;
  const double pair = b == bigram_counts_.end() ? 0.0 : b->second;
  return std::log((pair + add_k_) / (history + add_k_ * static_cast<double>(vocab_.size())));
}

double BigramLanguageModel::Loss(std::span<const std::string> keys) const {
  double nll = 0.0;
  std::string_view prev = kBegin;
  for (const std::string& w : keys) {
    nll -= LogProb(prev, w);
    prev = w;
  }
  nll -= LogProb(prev, kEnd);
  return nll / static_cast<double>(keys.size() + 1);
}

}  // namespace cfedit
