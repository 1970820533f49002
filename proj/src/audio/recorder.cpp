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

#include "sar/audio/recorder.hpp"

#include <stdexcept>

#include "sar/audio/rms.hpp"

namespace sar::audio {

UtteranceRecorder::UtteranceRecorder(VadConfig vad, std::size_t fragment_size)
    : fragment_size_(fragment_size) {
  vad.validate();
  if (fragment_size == 0) throw std::invalid_argument("fragment size must be positive");
  state_.config = vad;
}

std::vector<RecorderEvent> UtteranceRecorder::push_window(std::span<const double> window, double rms) {
  std::vector<RecorderEvent> out;
  auto step = vad_step(state_, rms);
  bool was_speaking = state_.phase == VadPhase::kSpeaking;
  state_ = step.state;

  if (step.event == VadEvent::kSpeechStart) {
    out.emplace_back(UtteranceStarted{position_});
    pending_.clear();
    emitted_ = 0;
  }
  if (was_speaking || step.event == VadEvent::kSpeechStart) {
    pending_.insert(pending_.end(), window.begin(), window.end());
    while (pending_.size() >= fragment_size_) {
      FragmentReady f{emitted_++, {pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(fragment_size_)}};
      pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(fragment_size_));
      out.emplace_back(std::move(f));
    }
  }
  position_ += window.size();
  if (step.event == VadEvent::kSpeechStop) close_utterance(out);
  return out;
}

std::vector<RecorderEvent> UtteranceRecorder::finish() {
  std::vector<RecorderEvent> out;
  if (state_.phase == VadPhase::kSpeaking) {
    close_utterance(out);
    state_.phase = VadPhase::kIdle;
    state_.hangover_count = 0;
  }
  return out;
}

void UtteranceRecorder::close_utterance(std::vector<RecorderEvent>& out) {
  if (!pending_.empty()) out.emplace_back(FragmentReady{emitted_++, std::move(pending_)});
  pending_.clear();
  out.emplace_back(UtteranceEnded{position_, emitted_});
}

std::vector<Segment> segment_utterances(std::span<const double> samples, unsigned sample_rate_hz,
                                        const VadConfig& vad) {
  std::size_t window = window_length(sample_rate_hz);
  if (window == 0) throw std::invalid_argument("sample rate too low for 0.1 s windows");
  auto rms = windowed_rms_parallel(samples, window);
  UtteranceRecorder recorder(vad, samples.size() + 1);
  std::vector<Segment> segments;
  auto collect = [&](const std::vector<RecorderEvent>& events) {
    for (const auto& e : events) {
      if (const auto* s = std::get_if<UtteranceStarted>(&e)) segments.push_back({s->start_sample, 0});
      if (const auto* end = std::get_if<UtteranceEnded>(&e)) segments.back().end_sample = end->end_sample;
    }
  };
  for (std::size_t w = 0; w < rms.size(); ++w) {
    collect(recorder.push_window(samples.subspan(w * window, window), rms[w]));
  }
  collect(recorder.finish());
  return segments;
}

}  // namespace sar::audio
