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

#include "cfedit/text.h"

#include <algorithm>
#include <cctype>

namespace cfedit {
namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool IsPunct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool IsAlnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

Token MakeToken(std::string_view surface, bool space_before) {
  Token t;
  t.text = std::string(surface);
  t.key = Lowercase(surface);
  t.space_before = space_before;
  for (char c : surface) {
    if (IsAlnum(c) || static_cast<unsigned char>(c) >= 0x80) {
      t.is_word = true;
      break;
    }
  }
  return t;
}

}  // namespace

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  size_t pos = 0;
  bool first_chunk = true;
  while (pos < text.size()) {
    while (pos < text.size() && IsSpace(text[pos])) ++pos;
    if (pos >= text.size()) break;
    size_t end = pos;
    while (end < text.size() && !IsSpace(text[end])) ++end;
    std::string_view chunk = text.substr(pos, end - pos);
    bool space_before = !first_chunk;
    first_chunk = false;

    size_t lead = 0;
    while (lead < chunk.size() && IsPunct(chunk[lead])) ++lead;
    size_t trail = chunk.size();
    while (trail > lead && IsPunct(chunk[trail - 1])) --trail;

    // Leading punctuation: one token per character ("(" and "\"" etc.).
    for (size_t i = 0; i < lead; ++i) {
      tokens.push_back(MakeToken(chunk.substr(i, 1), space_before));
      space_before = false;
    }
    if (trail > lead) {
      tokens.push_back(MakeToken(chunk.substr(lead, trail - lead), space_before));
      space_before = false;
    }
    // Trailing punctuation runs like "..." or "!?" stay together.
    if (trail < chunk.size() && lead < chunk.size()) {
      size_t start = std::max(trail, lead);
      size_t i = start;
      while (i < chunk.size()) {
        size_t j = i + 1;
        while (j < chunk.size() && chunk[j] == chunk[i]) ++j;
        tokens.push_back(MakeToken(chunk.substr(i, j - i), space_before));
        space_before = false;
        i = j;
      }
    }
    pos = end;
  }
  return tokens;
}

std::string Detokenize(std::span<const Token> tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (t.space_before) out.push_back(' ');
    out += t.text;
  }
  return out;
}

std::vector<std::string> TokenKeys(std::span<const Token> tokens) {
  std::vector<std::string> keys;
  keys.reserve(tokens.size());
  for (const Token& t : tokens) keys.push_back(t.key);
  return keys;
}

std::vector<std::string> WordKeys(std::span<const Token> tokens) {
  std::vector<std::string> keys;
  for (const Token& t : tokens) {
    if (t.is_word) keys.push_back(t.key);
  }
  return keys;
}

std::string MatchCase(std::string_view pattern, std::string_view word) {
  bool has_alpha = false;
  bool all_upper = true;
  for (char c : pattern) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      has_alpha = true;
      if (!std::isupper(static_cast<unsigned char>(c))) all_upper = false;
    }
  }
  std::string out = Lowercase(word);
  if (!has_alpha || out.empty()) return out;
  if (all_upper && pattern.size() > 1) {
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  } else if (std::isupper(static_cast<unsigned char>(pattern.front()))) {
    out.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(out.front())));
  }
  return out;
}

}  // namespace cfedit
