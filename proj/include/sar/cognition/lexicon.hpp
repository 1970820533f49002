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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace sar {

/// Splits on every non-alphanumeric character and lowercases (ASCII).
std::vector<std::string> tokenize(std::string_view text);

struct LexiconHits {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

/// Two word lists; a word may appear in at most one of them.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::vector<std::string> positive, std::vector<std::string> negative);

  /// One word per line; blank lines and lines starting with '#' are ignored.
  static Lexicon load(const std::filesystem::path& positive_file, const std::filesystem::path& negative_file);

  bool is_positive(const std::string& token) const { return positive_.count(token) > 0; }
  bool is_negative(const std::string& token) const { return negative_.count(token) > 0; }

  LexiconHits count(const std::vector<std::string>& tokens) const;

  /// P / (P + N) in its symmetric form (1 + (P - N) / (P + N)) / 2; 0.5 with no hits.
  double score(std::string_view text) const;

  std::size_t positive_size() const { return positive_.size(); }
  std::size_t negative_size() const { return negative_.size(); }

 private:
  std::unordered_set<std::string> positive_;
  std::unordered_set<std::string> negative_;
};

double sentiment_from_hits(LexiconHits hits);

}  // namespace sar
