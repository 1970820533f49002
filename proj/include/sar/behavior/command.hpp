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

#include <optional>
#include <string>
#include <string_view>

namespace sar {

enum class BehaviorKind { kAnimation, kSpeech, kRetryPrompt };

constexpr std::string_view behavior_kind_name(BehaviorKind k) {
  switch (k) {
    case BehaviorKind::kAnimation:
      return "animation";
    case BehaviorKind::kSpeech:
      return "speech";
    case BehaviorKind::kRetryPrompt:
      return "retry_prompt";
  }
  return "";
}

inline std::optional<BehaviorKind> parse_behavior_kind(std::string_view name) {
  if (name == "animation") return BehaviorKind::kAnimation;
  if (name == "speech") return BehaviorKind::kSpeech;
  if (name == "retry_prompt") return BehaviorKind::kRetryPrompt;
  return std::nullopt;
}

/// A single instruction for the robot. Animations carry an id, speech and
/// retry prompts carry text.
struct BehaviorCommand {
  BehaviorKind kind = BehaviorKind::kSpeech;
  std::string animation_id;
  std::string text;

  static BehaviorCommand animation(std::string id) {
    return {BehaviorKind::kAnimation, std::move(id), {}};
  }
  static BehaviorCommand speech(std::string text) {
    return {BehaviorKind::kSpeech, {}, std::move(text)};
  }
  static BehaviorCommand retry_prompt(std::string text) {
    return {BehaviorKind::kRetryPrompt, {}, std::move(text)};
  }

  bool operator==(const BehaviorCommand&) const = default;
};

}  // namespace sar
