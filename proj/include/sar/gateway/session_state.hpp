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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sar/behavior/arbitration.hpp"
#include "sar/behavior/command.hpp"
#include "sar/cognition/emotion.hpp"
#include "sar/gateway/event_log.hpp"

namespace sar::gateway {

/// Everything the gateway knows about a session, derived solely from its event
/// log. The live gateway folds each event into this state as it records it, so
/// replaying a stored log reproduces the live state exactly.
struct SessionState {
  std::string session_id;
  std::string robot_id;
  std::string child_id;
  std::optional<TimePoint> started;
  std::optional<TimePoint> ended;

  std::optional<std::string> active_script_id;
  bool operator_override = false;

  unsigned retry_limit = 3;
  unsigned retry_counter = 0;
  std::uint64_t retry_limit_hits = 0;

  std::optional<Emotion> last_emotion;
  std::optional<EmotionVector> last_scores;
  std::optional<double> last_sentiment;
  std::string last_transcript;
  /// Completed sentiment turns per band; drives round-robin phrase choice.
  std::array<std::uint64_t, 3> band_turns{};

  std::vector<BehaviorCommand> behaviors;
  std::uint64_t events = 0;
  std::uint64_t errors = 0;
  std::uint64_t warnings = 0;

  bool live() const { return started.has_value() && !ended.has_value(); }
  bool operator==(const SessionState&) const = default;
};

void apply(SessionState& state, const SessionEvent& event);
SessionState replay(std::span<const SessionEvent> events);

nlohmann::json to_json(const SessionState& state);

}  // namespace sar::gateway
