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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sar/behavior/command.hpp"
#include "sar/cognition/emotion.hpp"
#include "sar/common/clock.hpp"

namespace sar::user {

inline constexpr double kDefaultAlpha = 0.3;

/// Per-child model. The emotion profile stays absent until the first
/// observation; it is never filled with made-up values.
struct UserModel {
  std::string child_id;
  std::map<std::string, std::string> preferences;
  std::optional<EmotionVector> emotion_profile;
  std::uint64_t observation_count = 0;
  std::optional<TimePoint> last_updated;
  std::vector<std::string> sessions;

  bool operator==(const UserModel&) const = default;
};

/// First observation copies the scores; later ones blend them in with weight
/// `alpha`: profile <- (1 - alpha) * profile + alpha * scores.
UserModel observe_emotion(UserModel model, const EmotionScores& scores, TimePoint ts,
                          double alpha = kDefaultAlpha);

class NoObservations : public std::logic_error {
 public:
  NoObservations() : std::logic_error("user model has no emotion observations yet") {}
};

/// Linear valence weights per emotion (happiness, sadness, surprise, fear, anger, disgust).
inline constexpr EmotionVector kValenceWeights = {1.0, -1.0, 0.25, -0.75, -0.75, -0.75};

/// Weighted sum before clamping.
double raw_valence(const EmotionVector& profile);

/// raw_valence clamped to [-1, 1]. Throws NoObservations.
double mood_valence(const UserModel& model);

/// Step text may reference preferences as {key}; unknown keys are left as is.
std::string render_template(const std::string& text, const std::map<std::string, std::string>& values);

class InvalidScript : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A social story or routine: behavior templates performed in order, suited
/// to moods within [mood_lo, mood_hi].
struct BehaviorScript {
  std::string script_id;
  std::string title;
  std::vector<BehaviorCommand> steps;
  double mood_lo = -1.0;
  double mood_hi = 1.0;
  std::optional<TimePoint> last_used;

  /// Throws InvalidScript: empty id or steps, range not within [-1, 1], lo > hi,
  /// animation steps without an id, speech steps without text.
  void validate() const;

  bool contains(double valence) const { return valence >= mood_lo && valence <= mood_hi; }
  double midpoint() const { return (mood_lo + mood_hi) / 2.0; }

  bool operator==(const BehaviorScript&) const = default;
};

class EmptyLibrary : public std::invalid_argument {
 public:
  EmptyLibrary() : std::invalid_argument("script library is empty") {}
};

/// Among scripts whose range contains the valence, the least recently used
/// (never used first, then smaller id). With no match, the script whose range
/// midpoint is nearest, ties to the smaller id.
const BehaviorScript& choose_script_for_valence(std::span<const BehaviorScript> library, double valence);

/// choose_script_for_valence with the model's current valence. Throws
/// EmptyLibrary or NoObservations.
const BehaviorScript& choose_script(std::span<const BehaviorScript> library, const UserModel& model);

nlohmann::json to_json(const UserModel& model);
UserModel user_model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BehaviorScript& script);
/// Throws InvalidScript on schema or invariant violations.
BehaviorScript script_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BehaviorCommand& command);
BehaviorCommand command_from_json(const nlohmann::json& j);

}  // namespace sar::user
