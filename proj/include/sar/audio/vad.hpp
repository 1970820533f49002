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

#include <cstddef>
#include <vector>

namespace sar::audio {

enum class VadPhase { kIdle, kSpeaking };
enum class VadEvent { kNone, kSpeechStart, kSpeechStop };

struct VadConfig {
  double start_threshold = 0.02;
  double stop_threshold = 0.01;
  unsigned hangover_windows = 5;

  /// Throws std::invalid_argument unless 0 <= stop <= start and hangover > 0.
  void validate() const;
};

/// Hysteresis voice-activity detector over per-window RMS values.
struct VadState {
  VadPhase phase = VadPhase::kIdle;
  unsigned hangover_count = 0;
  VadConfig config;

  bool operator==(const VadState&) const = default;
};

struct VadStep {
  VadState state;
  VadEvent event = VadEvent::kNone;
};

/// Idle -> Speaking when rms >= start_threshold. While speaking, every window
/// below stop_threshold counts toward the hangover and any window at or above
/// it resets the count; the hangover_windows-th consecutive quiet window stops.
VadStep vad_step(VadState state, double rms);

std::vector<VadEvent> vad_run(VadState state, const std::vector<double>& rms);

}  // namespace sar::audio
