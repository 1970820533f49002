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

#include "sar/behavior/arbitration.hpp"

#include <set>

namespace sar::behavior {

Emotion predominant_emotion(const EmotionVector& scores) {
  Emotion best = kEmotions.front();
  for (Emotion e : kEmotions) {
    if (scores[index_of(e)] > scores[index_of(best)]) best = e;
  }
  return best;
}

AnimationTable AnimationTable::from_map(const std::map<std::string, std::string>& entries) {
  AnimationTable table;
  for (const auto& [key, id] : entries) {
    if (!parse_emotion(key)) throw InvalidTable("animation table has unknown emotion '" + key + "'");
    if (id.empty()) throw InvalidTable("animation id for '" + key + "' is empty");
  }
  std::set<std::string> seen;
  for (Emotion e : kEmotions) {
    auto it = entries.find(std::string(emotion_name(e)));
    if (it == entries.end()) {
      throw IncompleteTable("animation table is missing '" + std::string(emotion_name(e)) + "'");
    }
    if (!seen.insert(it->second).second) {
      throw InvalidTable("animation id '" + it->second + "' is used by more than one emotion");
    }
    table.ids_[index_of(e)] = it->second;
  }
  return table;
}

bool AnimationTable::contains_id(const std::string& id) const {
  for (const auto& known : ids_) {
    if (known == id) return true;
  }
  return false;
}

BehaviorCommand select_animation(Emotion label, const AnimationTable& table) {
  return BehaviorCommand::animation(table.animation_for(label));
}

const char* band_name(SentimentBand band) {
  switch (band) {
    case SentimentBand::kNegative:
      return "negative";
    case SentimentBand::kNeutral:
      return "neutral";
    case SentimentBand::kPositive:
      return "positive";
  }
  return "";
}

SentimentBand sentiment_band(double score) {
  if (!in_unit_interval(score)) throw std::invalid_argument("sentiment score outside [0,1]");
  if (score < kNegativeBelow) return SentimentBand::kNegative;
  if (score > kPositiveAbove) return SentimentBand::kPositive;
  return SentimentBand::kNeutral;
}

PhraseTable PhraseTable::from_map(const std::map<std::string, std::vector<std::string>>& entries) {
  PhraseTable table;
  for (auto band : {SentimentBand::kNegative, SentimentBand::kNeutral, SentimentBand::kPositive}) {
    auto it = entries.find(band_name(band));
    if (it == entries.end() || it->second.empty()) {
      throw IncompleteTable(std::string("phrase table has no phrases for '") + band_name(band) + "'");
    }
    for (const auto& phrase : it->second) {
      if (phrase.empty()) throw InvalidTable(std::string("empty phrase in '") + band_name(band) + "'");
    }
    table.lists_[static_cast<std::size_t>(band)] = it->second;
  }
  return table;
}

BehaviorCommand select_response(SentimentBand band, const PhraseTable& table, std::size_t turn) {
  const auto& list = table.phrases(band);
  return BehaviorCommand::speech(list[turn % list.size()]);
}

BehaviorCommand ResponseSelector::select(SentimentBand band, const PhraseTable& table) {
  return select_response(band, table, next_[static_cast<std::size_t>(band)]++);
}

BehaviorCommand handle_recognition_error(const std::string& retry_phrase) {
  return BehaviorCommand::retry_prompt(retry_phrase);
}

bool RetryTracker::on_failure() {
  ++count_;
  if (limit_ > 0 && count_ >= limit_) {
    count_ = 0;
    return true;
  }
  return false;
}

BehaviorConfig BehaviorConfig::defaults() {
  BehaviorConfig c;
  c.animations = AnimationTable::from_map({{"happiness", "dance_joy"},
                                           {"sadness", "comfort_hug"},
                                           {"surprise", "wow_arms"},
                                           {"fear", "reassure_crouch"},
                                           {"anger", "calm_breathing"},
                                           {"disgust", "head_shake"}});
  c.phrases = PhraseTable::from_map({{"negative", {"I am sorry you feel that way. Do you want a hug?"}},
                                     {"neutral", {"I see. Tell me more."}},
                                     {"positive", {"That is wonderful! I am happy too."}}});
  c.retry_phrase = "I could not see your face. Shall we try again?";
  c.retry_limit = 3;
  return c;
}

BehaviorConfig BehaviorConfig::from_json(const nlohmann::json& j) {
  BehaviorConfig c = defaults();
  try {
    if (j.contains("animations")) {
      c.animations = AnimationTable::from_map(j.at("animations").get<std::map<std::string, std::string>>());
    }
    if (j.contains("phrases")) {
      c.phrases = PhraseTable::from_map(j.at("phrases").get<std::map<std::string, std::vector<std::string>>>());
    }
    if (j.contains("retry_phrase")) c.retry_phrase = j.at("retry_phrase").get<std::string>();
    if (j.contains("retry_limit")) c.retry_limit = j.at("retry_limit").get<unsigned>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidTable(std::string("behavior configuration: ") + e.what());
  }
  if (c.retry_phrase.empty()) throw InvalidTable("retry phrase is empty");
  return c;
}

}  // namespace sar::behavior
