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

#ifndef CFEDIT_TEXT_H_
#define CFEDIT_TEXT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfedit {

// A token keeps its original surface form for re-insertion and a lowercased
// key for every lookup (taxonomy, embeddings, classifier, language model).
struct Token {
  std::string text;
  std::string key;
  bool is_word = false;
  bool space_before = false;
};

// Splits on whitespace, then peels leading/trailing punctuation off each chunk
// into separate tokens. Internal apostrophes and hyphens stay in the word.
std::vector<Token> Tokenize(std::string_view text);

// Rebuilds text from tokens; Detokenize(Tokenize(s)) == s whenever s uses
// single spaces between chunks.
std::string Detokenize(std::span<const Token> tokens);

std::vector<std::string> TokenKeys(std::span<const Token> tokens);
std::vector<std::string> WordKeys(std::span<const Token> tokens);

std::string Lowercase(std::string_view s);

// Gives `word` the capitalization pattern of `pattern`: ALL CAPS, Capitalized
// or lowercase.
std::string MatchCase(std::string_view pattern, std::string_view word);

}  // namespace cfedit

#endif  // CFEDIT_TEXT_H_
