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
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "sar/audio/vad.hpp"

namespace sar::audio {

struct UtteranceStarted {
  std::size_t start_sample = 0;
};

struct FragmentReady {
  std::uint32_t index = 0;
  std::vector<double> samples;
};

struct UtteranceEnded {
  std::size_t end_sample = 0;  // one past the last recorded sample
  std::uint32_t fragment_count = 0;
};

using RecorderEvent = std::variant<UtteranceStarted, FragmentReady, UtteranceEnded>;

/// Streaming recorder driven by the VAD: records from the window that starts
/// speech through the window that stops it, emitting full fragments as soon
/// as they fill up and the remainder when the utterance ends.
class UtteranceRecorder {
 public:
  UtteranceRecorder(VadConfig vad, std::size_t fragment_size);

  /// `rms` must be the RMS of `window`.
  std::vector<RecorderEvent> push_window(std::span<const double> window, double rms);

  /// Closes an utterance still open at end of stream.
  std::vector<RecorderEvent> finish();

  bool speaking() const { return state_.phase == VadPhase::kSpeaking; }

 private:
  void close_utterance(std::vector<RecorderEvent>& out);

  VadState state_;
  std::size_t fragment_size_;
  std::size_t position_ = 0;
  std::vector<double> pending_;
  std::uint32_t emitted_ = 0;
};

struct Segment {
  std::size_t start_sample = 0;
  std::size_t end_sample = 0;
};

/// Offline segmentation of a whole recording into utterances using
/// non-overlapping 0.1 s windows.
std::vector<Segment> segment_utterances(std::span<const double> samples, unsigned sample_rate_hz,
                                        const VadConfig& vad);

}  // namespace sar::audio
