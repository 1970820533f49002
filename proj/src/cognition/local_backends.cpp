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

#include "sar/cognition/backends.hpp"

#include <algorithm>
#include <cmath>

namespace sar {

SentimentScore::SentimentScore(double value) : value_(value) {
  if (!in_unit_interval(value)) throw std::invalid_argument("sentiment score outside [0,1]");
}

RecognitionResult ManifestEmotionRecognizer::classify(const Image& image) {
  image.validate();
  auto label = manifest_->emotion_for(image_hash(image));
  if (!label) return NoFace{};
  EmotionScores scores;
  scores.service = ServiceKind::kMock;
  scores.values.fill(kFixtureOtherConfidence);
  scores[*label] = kFixtureHitConfidence;
  return scores;
}

std::string ManifestSpeechToText::transcribe(std::span<const double> samples, unsigned /*sample_rate_hz*/) {
  return manifest_->transcript_for(audio_hash(samples)).value_or("");
}

SentimentScore LexiconSentimentAnalyzer::analyze(std::string_view text) {
  return SentimentScore(lexicon_->score(text));
}

std::string DelayedSpeechToText::transcribe(std::span<const double> samples, unsigned sample_rate_hz) {
  clock_.sleep_for(latency_);
  return inner_->transcribe(samples, sample_rate_hz);
}

}  // namespace sar
