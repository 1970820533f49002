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

#include "sar/audio/vad.hpp"

#include <stdexcept>

namespace sar::audio {

void VadConfig::validate() const {
  if (!(stop_threshold >= 0.0) || !(stop_threshold <= start_threshold)) {
    throw std::invalid_argument("VAD thresholds must satisfy 0 <= stop <= start");
  }
  if (hangover_windows == 0) throw std::invalid_argument("VAD hangover must be positive");
}

VadStep vad_step(VadState state, double rms) {
  if (state.phase == VadPhase::kIdle) {
    if (rms >= state.config.start_threshold) {
      state.phase = VadPhase::kSpeaking;
      state.hangover_count = 0;
      return {state, VadEvent::kSpeechStart};
    }
    return {state, VadEvent::kNone};
  }

  if (rms >= state.config.stop_threshold) {
    state.hangover_count = 0;
    return {state, VadEvent::kNone};
  }
  ++state.hangover_count;
  if (state.hangover_count >= state.config.hangover_windows) {
    state.phase = VadPhase::kIdle;
    state.hangover_count = 0;
    return {state, VadEvent::kSpeechStop};
  }
  return {state, VadEvent::kNone};
}

std::vector<VadEvent> vad_run(VadState state, const std::vector<double>& rms) {
  std::vector<VadEvent> events;
  events.reserve(rms.size());
  for (double r : rms) {
    auto step = vad_step(state, r);
    state = step.state;
    events.push_back(step.event);
  }
  return events;
}

}  // namespace sar::audio
