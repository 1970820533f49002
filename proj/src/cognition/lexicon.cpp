// Copyright 2026 The SAR Gateway Authors
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

#include "sar/cognition/lexicon.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace sar {
namespace {

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = tokenize(line);
    if (line.empty() || line.front() == '#' || tokens.empty()) continue;
    if (tokens.size() != 1) throw std::runtime_error("lexicon line '" + line + "' is not a single word");
    words.push_back(tokens.front());
  }
  return words;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      current.push_back(static_cast<char>(std::tolower(u)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Lexicon::Lexicon(std::vector<std::string> positive, std::vector<std::string> negative) {
  for (auto& w : positive) positive_.insert(std::move(w));
  for (auto& w : negative) {
    if (positive_.count(w) > 0) throw std::invalid_argument("'" + w + "' is in both lexicons");
    negative_.insert(std::move(w));
  }
}

Lexicon Lexicon::load(const std::filesystem::path& positive_file, const std::filesystem::path& negative_file) {
  return Lexicon(read_word_list(positive_file), read_word_list(negative_file));
}

LexiconHits Lexicon::count(const std::vector<std::string>& tokens) const {
  LexiconHits hits;
  for (const auto& t : tokens) {
    if (is_positive(t)) ++hits.positive;
    else if (is_negative(t)) ++hits.negative;
  }
  return hits;
}

double sentiment_from_hits(LexiconHits hits) {
  std::size_t total = hits.positive + hits.negative;
  if (total == 0) return 0.5;
  double p = static_cast<double>(hits.positive);
  double n = static_cast<double>(hits.negative);
  return (1.0 + (p - n) / (p + n)) / 2.0;
}

double Lexicon::score(std::string_view text) const { return sentiment_from_hits(count(tokenize(text))); }

}  // namespace sar
