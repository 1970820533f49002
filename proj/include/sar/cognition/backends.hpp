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

#include <chrono>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sar/cognition/emotion.hpp"
#include "sar/cognition/image.hpp"
#include "sar/cognition/lexicon.hpp"
#include "sar/cognition/manifest.hpp"
#include "sar/common/clock.hpp"

namespace sar {

/// The analysis service could not be reached or answered garbage.
class BackendUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sentiment in [0, 1]; higher is more positive.
class SentimentScore {
 public:
  /// Throws std::invalid_argument outside [0, 1].
  explicit SentimentScore(double value);
  double value() const { return value_; }
  bool operator==(const SentimentScore&) const = default;

 private:
  double value_;
};

class EmotionRecognizer {
 public:
  virtual ~EmotionRecognizer() = default;
  /// Throws InvalidImage or BackendUnavailable.
  virtual RecognitionResult classify(const Image& image) = 0;
};

class SpeechToText {
 public:
  virtual ~SpeechToText() = default;
  /// Empty text when nothing was recognised. Throws BackendUnavailable.
  virtual std::string transcribe(std::span<const double> samples, unsigned sample_rate_hz) = 0;
};

class SentimentAnalyzer {
 public:
  virtual ~SentimentAnalyzer() = default;
  virtual SentimentScore analyze(std::string_view text) = 0;
};

// Local, deterministic backends -------------------------------------------

inline constexpr double kFixtureHitConfidence = 0.9;
inline constexpr double kFixtureOtherConfidence = 0.05;

/// Hit: the labelled emotion at 0.9 and the others at 0.05. Miss: NoFace.
class ManifestEmotionRecognizer final : public EmotionRecognizer {
 public:
  explicit ManifestEmotionRecognizer(std::shared_ptr<const FixtureManifest> manifest)
      : manifest_(std::move(manifest)) {}
  RecognitionResult classify(const Image& image) override;

 private:
  std::shared_ptr<const FixtureManifest> manifest_;
};

/// Looks the audio hash up; unknown audio transcribes to "".
class ManifestSpeechToText final : public SpeechToText {
 public:
  explicit ManifestSpeechToText(std::shared_ptr<const FixtureManifest> manifest)
      : manifest_(std::move(manifest)) {}
  std::string transcribe(std::span<const double> samples, unsigned sample_rate_hz) override;

 private:
  std::shared_ptr<const FixtureManifest> manifest_;
};

class LexiconSentimentAnalyzer final : public SentimentAnalyzer {
 public:
  explicit LexiconSentimentAnalyzer(std::shared_ptr<const Lexicon> lexicon) : lexicon_(std::move(lexicon)) {}
  SentimentScore analyze(std::string_view text) override;

 private:
  std::shared_ptr<const Lexicon> lexicon_;
};

/// Adds a fixed processing latency, measured on `clock`, before delegating.
class DelayedSpeechToText final : public SpeechToText {
 public:
  DelayedSpeechToText(std::shared_ptr<SpeechToText> inner, Clock& clock, Duration latency)
      : inner_(std::move(inner)), clock_(clock), latency_(latency) {}
  std::string transcribe(std::span<const double> samples, unsigned sample_rate_hz) override;

 private:
  std::shared_ptr<SpeechToText> inner_;
  Clock& clock_;
  Duration latency_;
};

// Remote HTTP backends ----------------------------------------------------

struct RemoteEndpoint {
  std::string host = "127.0.0.1";
  int port = 8090;
  std::string emotion_path = "/v1/emotion";
  std::string transcript_path = "/v1/transcript";
  std::string sentiment_path = "/v1/sentiment";
  std::chrono::milliseconds connect_timeout{5000};
  std::chrono::milliseconds total_timeout{10000};
};

/// POST {"width","height","pixels"(base64)}; the reply mirrors an emotion_result body.
class RemoteEmotionRecognizer final : public EmotionRecognizer {
 public:
  explicit RemoteEmotionRecognizer(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  RecognitionResult classify(const Image& image) override;

 private:
  RemoteEndpoint endpoint_;
};

/// POST {"sample_rate_hz","pcm_s16le"(base64)} -> {"transcript": "..."}.
class RemoteSpeechToText final : public SpeechToText {
 public:
  explicit RemoteSpeechToText(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::string transcribe(std::span<const double> samples, unsigned sample_rate_hz) override;

 private:
  RemoteEndpoint endpoint_;
};

/// POST {"text"} -> {"value": x}; x is clamped into [0, 1].
class RemoteSentimentAnalyzer final : public SentimentAnalyzer {
 public:
  explicit RemoteSentimentAnalyzer(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  SentimentScore analyze(std::string_view text) override;

 private:
  RemoteEndpoint endpoint_;
};

}  // namespace sar
