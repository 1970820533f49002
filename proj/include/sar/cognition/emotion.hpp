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
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace sar {

/// Ekman basic emotions, in canonical order. The order doubles as the argmax
/// tie-break priority (earlier wins).
enum class Emotion { kHappiness, kSadness, kSurprise, kFear, kAnger, kDisgust };

inline constexpr std::size_t kEmotionCount = 6;

inline constexpr std::array<Emotion, kEmotionCount> kEmotions = {
    Emotion::kHappiness, Emotion::kSadness, Emotion::kSurprise,
    Emotion::kFear,      Emotion::kAnger,   Emotion::kDisgust};

constexpr std::string_view emotion_name(Emotion e) {
  constexpr std::array<std::string_view, kEmotionCount> names = {
      "happiness", "sadness", "surprise", "fear", "anger", "disgust"};
  return names[static_cast<std::size_t>(e)];
}

constexpr std::optional<Emotion> parse_emotion(std::string_view name) {
  for (Emotion e : kEmotions) {
    if (emotion_name(e) == name) return e;
  }
  return std::nullopt;
}

/// One value per emotion, indexed by Emotion.
using EmotionVector = std::array<double, kEmotionCount>;

constexpr std::size_t index_of(Emotion e) { return static_cast<std::size_t>(e); }

inline bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

enum class ServiceKind { kMock, kRemote };

constexpr std::string_view service_name(ServiceKind s) {
  return s == ServiceKind::kMock ? "mock" : "remote";
}

inline std::optional<ServiceKind> parse_service(std::string_view name) {
  if (name == "mock") return ServiceKind::kMock;
  if (name == "remote") return ServiceKind::kRemote;
  return std::nullopt;
}

/// Per-class confidences; they need not sum to one.
struct EmotionScores {
  EmotionVector values{};
  ServiceKind service = ServiceKind::kMock;

  double operator[](Emotion e) const { return values[index_of(e)]; }
  double& operator[](Emotion e) { return values[index_of(e)]; }

  bool valid() const {
    for (double v : values) {
      if (!in_unit_interval(v)) return false;
    }
    return true;
  }

  bool operator==(const EmotionScores&) const = default;
};

/// The fixed error text carried whenever no face could be analysed.
inline constexpr std::string_view kMessageError = "message error";

struct NoFace {
  std::string message{kMessageError};
  bool operator==(const NoFace&) const = default;
};

using RecognitionResult = std::variant<EmotionScores, NoFace>;

}  // namespace sar
