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

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sar/behavior/command.hpp"
#include "sar/cognition/emotion.hpp"

namespace sar::behavior {

class InvalidTable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A required table key is missing.
class IncompleteTable : public InvalidTable {
 public:
  using InvalidTable::InvalidTable;
};

/// Label of the highest score. Ties go to the emotion listed first in kEmotions
/// (happiness, sadness, surprise, fear, anger, disgust).
Emotion predominant_emotion(const EmotionVector& scores);
inline Emotion predominant_emotion(const EmotionScores& scores) { return predominant_emotion(scores.values); }

/// Emotion -> animation id; covers all six emotions with distinct ids.
class AnimationTable {
 public:
  /// Throws IncompleteTable when an emotion is missing and InvalidTable on
  /// unknown keys, empty ids, or two emotions sharing an id.
  static AnimationTable from_map(const std::map<std::string, std::string>& entries);

  const std::string& animation_for(Emotion e) const { return ids_[index_of(e)]; }
  bool contains_id(const std::string& id) const;

 private:
  std::array<std::string, kEmotionCount> ids_;
};

BehaviorCommand select_animation(Emotion label, const AnimationTable& table);

enum class SentimentBand { kNegative, kNeutral, kPositive };

inline constexpr double kNegativeBelow = 0.4;
inline constexpr double kPositiveAbove = 0.6;

const char* band_name(SentimentBand band);

/// [0, 0.4) negative, [0.4, 0.6] neutral, (0.6, 1] positive.
/// Throws std::invalid_argument outside [0, 1].
SentimentBand sentiment_band(double score);

/// Non-empty phrase list per band.
class PhraseTable {
 public:
  /// Keys "negative", "neutral", "positive". Throws IncompleteTable.
  static PhraseTable from_map(const std::map<std::string, std::vector<std::string>>& entries);

  const std::vector<std::string>& phrases(SentimentBand band) const {
    return lists_[static_cast<std::size_t>(band)];
  }

 private:
  std::array<std::vector<std::string>, 3> lists_;
};

/// The phrase for the `turn`-th (0-based) response in `band`: round-robin.
BehaviorCommand select_response(SentimentBand band, const PhraseTable& table, std::size_t turn);

/// Per-session round-robin over each band's phrases.
class ResponseSelector {
 public:
  BehaviorCommand select(SentimentBand band, const PhraseTable& table);

 private:
  std::array<std::size_t, 3> next_{};
};

BehaviorCommand handle_recognition_error(const std::string& retry_phrase);

/// Consecutive recognition failures within a session.
class RetryTracker {
 public:
  explicit RetryTracker(unsigned limit = 3) : limit_(limit) {}

  /// Counts a failure. Returns true when this failure reaches the limit; the
  /// counter then starts over so the session can continue.
  bool on_failure();
  void on_success() { count_ = 0; }

  unsigned count() const { return count_; }
  unsigned limit() const { return limit_; }

 private:
  unsigned limit_;
  unsigned count_ = 0;
};

/// Tables and phrases the gateway reads from its configuration file.
struct BehaviorConfig {
  AnimationTable animations;
  PhraseTable phrases;
  std::string retry_phrase;
  unsigned retry_limit = 3;

  /// Reads the "animations", "phrases", "retry_phrase" and "retry_limit" keys.
  static BehaviorConfig from_json(const nlohmann::json& j);
  static BehaviorConfig defaults();
};

}  // namespace sar::behavior
