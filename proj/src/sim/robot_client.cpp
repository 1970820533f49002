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

#include "sar/sim/robot_client.hpp"

#include <algorithm>

#include "sar/audio/pcm.hpp"
#include "sar/audio/recorder.hpp"
#include "sar/audio/rms.hpp"
#include "sar/cognition/image.hpp"
#include "sar/user/user_model.hpp"
#include "sar/wire/frame.hpp"

namespace sar::sim {

RobotClient::RobotClient(std::shared_ptr<net::ByteStream> stream, Clock& clock)
    : stream_(std::move(stream)), clock_(clock), inbox_(clock) {
  reader_ = spawn_participant(clock_, [this] { read_loop(); });
}

RobotClient::~RobotClient() {
  stream_->close();
  if (reader_.joinable()) {
    clock_.release();
    reader_.join();
    clock_.hold();
  }
}

void RobotClient::read_loop() {
  wire::FrameDecoder decoder;
  try {
    while (auto chunk = stream_->read_some()) {
      decoder.append(*chunk);
      while (auto m = decoder.next()) {
        Received r{std::move(*m), clock_.now()};
        {
          std::lock_guard guard(mutex_);
          received_.push_back(r);
        }
        inbox_.push(std::move(r));
      }
    }
  } catch (const std::exception& e) {
    std::lock_guard guard(mutex_);
    read_error_ = e.what();
  }
  inbox_.close();
}

std::uint64_t RobotClient::send(wire::Body body) {
  wire::Message m{tx_seq_++, std::move(body)};
  auto frame = wire::encode_frame(m);
  try {
    stream_->write(std::string_view(reinterpret_cast<const char*>(frame.data()), frame.size()));
  } catch (const net::StreamClosed&) {
    throw ConnectionLost("gateway closed the connection");
  }
  return m.seq;
}

std::optional<Received> RobotClient::await_reply(std::uint64_t seq, TimePoint deadline) {
  while (true) {
    Received r;
    switch (inbox_.pop_until(deadline, r)) {
      case PopStatus::kTimeout:
        return std::nullopt;
      case PopStatus::kClosed: {
        std::lock_guard guard(mutex_);
        throw ConnectionLost(read_error_.empty() ? "gateway closed the connection" : read_error_);
      }
      case PopStatus::kValue:
        break;
    }
    std::optional<std::uint64_t> reply_to;
    if (const auto* b = std::get_if<wire::Behavior>(&r.message.body)) reply_to = b->reply_to;
    if (const auto* e = std::get_if<wire::Error>(&r.message.body)) reply_to = e->reply_to;
    if (reply_to == seq) return r;
  }
}

bool RobotClient::finish(TimePoint deadline) {
  stream_->shutdown_write();
  Received r;
  while (true) {
    switch (inbox_.pop_until(deadline, r)) {
      case PopStatus::kTimeout:
        return false;
      case PopStatus::kClosed:
        return true;
      case PopStatus::kValue:
        break;
    }
  }
}

std::vector<BehaviorCommand> RobotClient::transcript() const {
  std::lock_guard guard(mutex_);
  std::vector<BehaviorCommand> out;
  for (const auto& r : received_) {
    if (const auto* b = std::get_if<wire::Behavior>(&r.message.body)) out.push_back(b->command);
  }
  return out;
}

std::vector<Received> RobotClient::received() const {
  std::lock_guard guard(mutex_);
  return received_;
}

namespace {

struct Pending {
  std::uint64_t seq;
  TimePoint sent;
};

// Streams a recording window by window in clock time, turning recorder events
// into audio frames. Returns the audio_end frames awaiting an answer.
std::vector<Pending> speak(const std::filesystem::path& file, RobotClient& client, Clock& clock,
                           const RunOptions& options, unsigned& utterance_counter) {
  auto wav = audio::read_wav(file);
  auto samples = audio::normalize(wav.pcm);
  auto window = std::max<std::size_t>(1, audio::window_length(wav.sample_rate_hz));
  auto window_duration = std::chrono::duration_cast<Duration>(
      std::chrono::duration<double>(static_cast<double>(window) / wav.sample_rate_hz));

  audio::UtteranceRecorder recorder(options.vad, options.fragment_size);
  std::vector<Pending> pending;
  std::string utterance_id;
  auto dispatch = [&](const std::vector<audio::RecorderEvent>& events) {
    for (const auto& ev : events) {
      if (std::holds_alternative<audio::UtteranceStarted>(ev)) {
        utterance_id = "u" + std::to_string(++utterance_counter);
        client.send(wire::AudioStart{utterance_id, wav.sample_rate_hz});
      } else if (const auto* f = std::get_if<audio::FragmentReady>(&ev)) {
        client.send(wire::AudioFragment{utterance_id, f->index, audio::quantize(f->samples)});
      } else if (const auto* e = std::get_if<audio::UtteranceEnded>(&ev)) {
        auto seq = client.send(wire::AudioEnd{utterance_id, e->fragment_count});
        pending.push_back({seq, clock.now()});
      }
    }
  };

  for (std::size_t off = 0; off < samples.size(); off += window) {
    auto len = std::min(window, samples.size() - off);
    std::span<const double> w(samples.data() + off, len);
    clock.sleep_for(window_duration);  // the window has now been captured
    dispatch(recorder.push_window(w, audio::compute_rms(w)));
  }
  dispatch(recorder.finish());
  return pending;
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, RobotClient& client, Clock& clock, const RunOptions& options) {
  RunResult result;
  auto start = clock.now();
  unsigned utterances = 0;

  auto await_all = [&](const std::vector<Pending>& pending) {
    for (const auto& p : pending) {
      auto reply = client.await_reply(p.seq, clock.now() + options.reply_timeout);
      if (!reply) {
        result.status = RunStatus::kTimeout;
        result.detail = "no answer to frame " + std::to_string(p.seq) + " within the reply timeout";
        return false;
      }
      result.reply_latencies.push_back(reply->at - p.sent);
    }
    return true;
  };

  try {
    client.send(wire::Hello{scenario.robot_id, scenario.child_id});
    for (const auto& step : scenario.steps) {
      clock.sleep_until(start + std::chrono::duration_cast<Duration>(std::chrono::duration<double>(step.at)));
      std::vector<Pending> pending;
      switch (step.action) {
        case StepAction::kSendImage: {
          auto image = read_ppm(step.file);
          auto seq = client.send(wire::ImageRequest{image.width, image.height, std::move(image.rgb)});
          pending.push_back({seq, clock.now()});
          break;
        }
        case StepAction::kSpeak:
          pending = speak(step.file, client, clock, options, utterances);
          break;
        case StepAction::kPause:
          break;
      }
      if (!await_all(pending)) break;
    }
    if (result.status == RunStatus::kOk && !client.finish(clock.now() + options.reply_timeout)) {
      result.status = RunStatus::kTimeout;
      result.detail = "gateway did not close the connection";
    }
  } catch (const ConnectionLost& e) {
    result.status = RunStatus::kConnectionFailed;
    result.detail = e.what();
  }

  result.transcript = client.transcript();
  if (result.status == RunStatus::kOk && options.check && scenario.expected) {
    result.diff = diff_transcript(*scenario.expected, result.transcript);
    if (!result.diff.empty()) result.status = RunStatus::kMismatch;
  }
  return result;
}

std::string format_transcript(const std::vector<BehaviorCommand>& transcript) {
  std::string out;
  for (const auto& c : transcript) out += user::to_json(c).dump() + "\n";
  return out;
}

}  // namespace sar::sim
