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
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "sar/audio/vad.hpp"
#include "sar/common/channel.hpp"
#include "sar/common/clock.hpp"
#include "sar/gateway/stream.hpp"
#include "sar/sim/scenario.hpp"
#include "sar/wire/message.hpp"

namespace sar::sim {

class ConnectionLost : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Received {
  wire::Message message;
  TimePoint at;
};

/// Robot side of one gateway connection. A reader thread collects incoming
/// frames; every behavior frame is appended to the transcript in arrival order.
class RobotClient {
 public:
  /// The calling thread must participate in `clock`.
  RobotClient(std::shared_ptr<net::ByteStream> stream, Clock& clock);
  ~RobotClient();

  RobotClient(const RobotClient&) = delete;
  RobotClient& operator=(const RobotClient&) = delete;

  /// Returns the seq the frame was sent with. Throws ConnectionLost.
  std::uint64_t send(wire::Body body);

  /// The behavior or error frame answering `seq`; nullopt when `deadline`
  /// passes first. Throws ConnectionLost when the gateway hangs up.
  std::optional<Received> await_reply(std::uint64_t seq, TimePoint deadline);

  /// Half-closes the connection and drains frames until the gateway closes
  /// its side. Returns false on timeout.
  bool finish(TimePoint deadline);

  std::vector<BehaviorCommand> transcript() const;
  std::vector<Received> received() const;

 private:
  void read_loop();

  std::shared_ptr<net::ByteStream> stream_;
  Clock& clock_;
  std::uint64_t tx_seq_ = 0;
  Channel<Received> inbox_;
  mutable std::mutex mutex_;
  std::vector<Received> received_;
  std::string read_error_;
  std::thread reader_;
};

enum class RunStatus { kOk = 0, kMismatch = 1, kConnectionFailed = 2, kTimeout = 3 };

struct RunOptions {
  Duration reply_timeout = std::chrono::seconds(15);
  audio::VadConfig vad;
  std::size_t fragment_size = 16000;
  /// Compare the transcript with the scenario's expectations.
  bool check = true;
};

struct RunResult {
  RunStatus status = RunStatus::kOk;
  std::vector<BehaviorCommand> transcript;
  std::vector<std::string> diff;
  std::string detail;
  /// Per request, time from sending its final frame to receiving its answer.
  std::vector<Duration> reply_latencies;
};

/// Plays `scenario` over `client`, honoring step offsets on `clock`.
RunResult run_scenario(const Scenario& scenario, RobotClient& client, Clock& clock, const RunOptions& options = {});

/// One JSON object per line.
std::string format_transcript(const std::vector<BehaviorCommand>& transcript);

}  // namespace sar::sim
