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

#include <functional>
#include <memory>
#include <thread>
#include <utility>
#include <vector>

#include "sar/common/clock.hpp"
#include "sar/gateway/gateway.hpp"
#include "sar/sim/robot_client.hpp"
#include "test_support.hpp"

namespace sar::testing {

/// A gateway with in-process robot connections, on a virtual clock unless
/// another clock is given. The constructing thread participates in the clock.
class GatewayHarness {
 public:
  using BackendFactory = std::function<gateway::Backends(const gateway::GatewayConfig&, Clock&)>;

  explicit GatewayHarness(gateway::GatewayConfig config, BackendFactory backends = gateway::make_backends,
                          std::unique_ptr<Clock> clock = std::make_unique<VirtualClock>())
      : owned_clock_(std::move(clock)),
        clock_(*owned_clock_),
        gateway_(std::make_unique<gateway::Gateway>(config, backends(config, clock_), clock_)) {}

  ~GatewayHarness() {
    clients_.clear();
    clock_.release();
    for (auto& t : threads_) t.join();
    gateway_.reset();
    clock_.hold();
  }

  GatewayHarness(const GatewayHarness&) = delete;
  GatewayHarness& operator=(const GatewayHarness&) = delete;

  struct Link {
    sim::RobotClient& client;
    std::shared_ptr<net::ByteStream> stream;
  };

  /// Opens a connection served on its own thread.
  Link connect() {
    auto [robot, server] = net::make_loopback_pair(clock_);
    threads_.push_back(spawn_participant(clock_, [this, server = server] { gateway_->serve(server); }));
    clients_.push_back(std::make_unique<sim::RobotClient>(robot, clock_));
    return {*clients_.back(), robot};
  }

  Clock& clock() { return clock_; }
  gateway::Gateway& gateway() { return *gateway_; }
  TimePoint deadline(Duration d = std::chrono::seconds(30)) { return clock_.now() + d; }

 private:
  std::unique_ptr<Clock> owned_clock_;
  Clock& clock_;
  std::unique_ptr<gateway::Gateway> gateway_;
  std::vector<std::thread> threads_;
  std::vector<std::unique_ptr<sim::RobotClient>> clients_;
};

}  // namespace sar::testing
