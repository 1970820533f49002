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

#include <gtest/gtest.h>

#include <random>

#include "sar/behavior/arbitration.hpp"

namespace sar::behavior {
namespace {

// Independent argmax: first index holding the maximum value.
std::size_t oracle_argmax(const EmotionVector& v) {
  double best = v[0];
  for (double x : v) best = std::max(best, x);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == best) return i;
  }
  return 0;
}

TEST(PredominantEmotion, AgreesWithBruteForceIncludingTies) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> coarse(0, 4);  // few distinct values -> many ties
  std::uniform_real_distribution<double> fine(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    EmotionVector v{};
    for (double& x : v) x = trial % 2 == 0 ? coarse(rng) / 4.0 : fine(rng);
    EXPECT_EQ(index_of(predominant_emotion(v)), oracle_argmax(v));
  }
}

TEST(PredominantEmotion, TiesFollowCanonicalOrder) {
  EXPECT_EQ(predominant_emotion(EmotionVector{0.5, 0.5, 0, 0, 0, 0}), Emotion::kHappiness);
  EXPECT_EQ(predominant_emotion(EmotionVector{0, 0.3, 0.3, 0.3, 0, 0}), Emotion::kSadness);
  EXPECT_EQ(predominant_emotion(EmotionVector{0, 0, 0, 0, 0.7, 0.7}), Emotion::kAnger);
  EXPECT_EQ(predominant_emotion(EmotionVector{}), Emotion::kHappiness);
}

TEST(AnimationTable, DefaultMapping) {
  auto table = BehaviorConfig::defaults().animations;
  EXPECT_EQ(select_animation(Emotion::kHappiness, table), BehaviorCommand::animation("dance_joy"));
  EXPECT_EQ(select_animation(Emotion::kSadness, table), BehaviorCommand::animation("comfort_hug"));
  EXPECT_TRUE(table.contains_id("head_shake"));
  EXPECT_FALSE(table.contains_id("moonwalk"));
}

TEST(AnimationTable, RejectsIncompleteOrAmbiguousTables) {
  std::map<std::string, std::string> full{{"happiness", "a"}, {"sadness", "b"}, {"surprise", "c"},
                                          {"fear", "d"},      {"anger", "e"},   {"disgust", "f"}};
  EXPECT_NO_THROW(AnimationTable::from_map(full));

  auto missing = full;
  missing.erase("fear");
  EXPECT_THROW(AnimationTable::from_map(missing), IncompleteTable);

  auto unknown = full;
  unknown["joy"] = "g";
  EXPECT_THROW(AnimationTable::from_map(unknown), InvalidTable);

  auto shared = full;
  shared["anger"] = "a";
  EXPECT_THROW(AnimationTable::from_map(shared), InvalidTable);

  auto empty = full;
  empty["disgust"] = "";
  EXPECT_THROW(AnimationTable::from_map(empty), InvalidTable);
}

TEST(RecognitionError, AlwaysARetryPrompt) {
  auto c = handle_recognition_error("again?");
  EXPECT_EQ(c.kind, BehaviorKind::kRetryPrompt);
  EXPECT_EQ(c.text, "again?");
  EXPECT_TRUE(c.animation_id.empty());
}

TEST(SentimentBand, BoundariesAreExact) {
  EXPECT_EQ(sentiment_band(0.0), SentimentBand::kNegative);
  EXPECT_EQ(sentiment_band(0.3999999), SentimentBand::kNegative);
  EXPECT_EQ(sentiment_band(0.4), SentimentBand::kNeutral);
  EXPECT_EQ(sentiment_band(0.5), SentimentBand::kNeutral);
  EXPECT_EQ(sentiment_band(0.6), SentimentBand::kNeutral);
  EXPECT_EQ(sentiment_band(0.6000001), SentimentBand::kPositive);
  EXPECT_EQ(sentiment_band(1.0), SentimentBand::kPositive);
  EXPECT_THROW(sentiment_band(-0.1), std::invalid_argument);
  EXPECT_THROW(sentiment_band(1.1), std::invalid_argument);
}

TEST(SelectResponse, RoundRobinPerBand) {
  auto table = PhraseTable::from_map({{"negative", {"n0"}}, {"neutral", {"m0", "m1", "m2"}}, {"positive", {"p0", "p1"}}});
  std::vector<std::string> got;
  for (std::size_t turn = 0; turn < 5; ++turn) got.push_back(select_response(SentimentBand::kPositive, table, turn).text);
  EXPECT_EQ(got, (std::vector<std::string>{"p0", "p1", "p0", "p1", "p0"}));

  ResponseSelector selector;
  EXPECT_EQ(selector.select(SentimentBand::kNeutral, table).text, "m0");
  EXPECT_EQ(selector.select(SentimentBand::kPositive, table).text, "p0");
  EXPECT_EQ(selector.select(SentimentBand::kNeutral, table).text, "m1");
  EXPECT_EQ(selector.select(SentimentBand::kNegative, table).text, "n0");
  EXPECT_EQ(selector.select(SentimentBand::kNegative, table).text, "n0");
}

TEST(PhraseTable, EveryBandNeedsPhrases) {
  EXPECT_THROW(PhraseTable::from_map({{"negative", {"a"}}, {"neutral", {"b"}}}), IncompleteTable);
  EXPECT_THROW(PhraseTable::from_map({{"negative", {"a"}}, {"neutral", {}}, {"positive", {"c"}}}), IncompleteTable);
}

TEST(RetryTracker, SignalsAtTheLimitAndStartsOver) {
  RetryTracker tracker(3);
  EXPECT_FALSE(tracker.on_failure());
  EXPECT_FALSE(tracker.on_failure());
  EXPECT_TRUE(tracker.on_failure());
  EXPECT_EQ(tracker.count(), 0u);
  EXPECT_FALSE(tracker.on_failure());
  tracker.on_success();
  EXPECT_EQ(tracker.count(), 0u);
}

TEST(BehaviorConfig, ReadsOverridesAndKeepsDefaults) {
  auto c = BehaviorConfig::from_json({{"retry_limit", 5}, {"retry_phrase", "Look at me please"}});
  EXPECT_EQ(c.retry_limit, 5u);
  EXPECT_EQ(c.retry_phrase, "Look at me please");
  EXPECT_EQ(c.animations.animation_for(Emotion::kFear), "reassure_crouch");
  EXPECT_THROW(BehaviorConfig::from_json({{"retry_phrase", ""}}), InvalidTable);
  EXPECT_THROW(BehaviorConfig::from_json({{"animations", {{"happiness", "x"}}}}), IncompleteTable);
  EXPECT_THROW(BehaviorConfig::from_json({{"retry_limit", "three"}}), InvalidTable);
}

}  // namespace
}  // namespace sar::behavior
