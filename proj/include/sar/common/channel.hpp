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

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>

#include "sar/common/clock.hpp"

namespace sar {

enum class PopStatus { kValue, kClosed, kTimeout };

/// Multi-producer, single-consumer queue whose blocking pop cooperates with
/// simulated time: a parked consumer does not hold the clock, and whoever wakes
/// it (a producer, close(), or its deadline timer) takes a hold on its behalf.
template <typename T>
class Channel {
 public:
  explicit Channel(Clock& clock) : state_(std::make_shared<State>(clock)) {}

  void push(T value) {
    std::lock_guard lock(state_->mutex);
    state_->items.push_back(std::move(value));
    state_->unpark();
  }

  void close() {
    std::lock_guard lock(state_->mutex);
    state_->closed = true;
    state_->unpark();
  }

  bool closed() const {
    std::lock_guard lock(state_->mutex);
    return state_->closed;
  }

  std::optional<T> pop() {
    T out;
    if (pop_until(std::nullopt, out) == PopStatus::kValue) return out;
    return std::nullopt;
  }

  PopStatus pop_until(std::optional<TimePoint> deadline, T& out) {
    auto& s = *state_;
    std::unique_lock lock(s.mutex);
    bool timed_out = false;
    while (true) {
      if (!s.items.empty()) {
        out = std::move(s.items.front());
        s.items.pop_front();
        return PopStatus::kValue;
      }
      if (s.closed) return PopStatus::kClosed;
      if (timed_out) return PopStatus::kTimeout;

      std::uint64_t generation = ++s.generation;
      std::optional<Clock::TimerId> timer;
      if (deadline) {
        timer = s.clock.schedule(*deadline, [weak = std::weak_ptr<State>(state_), generation] {
          auto st = weak.lock();
          if (!st) return;
          std::lock_guard inner(st->mutex);
          if (st->parked && st->generation == generation) {
            st->parked = false;
            st->timer_woke = true;
            st->cv.notify_all();
          } else {
            st->clock.release();
          }
        });
      }
      s.parked = true;
      s.timer_woke = false;
      s.clock.release();
      s.cv.wait(lock, [&] { return !s.parked; });
      if (s.timer_woke) {
        timed_out = true;
      } else if (timer) {
        s.clock.cancel(*timer);
      }
    }
  }

 private:
  struct State {
    explicit State(Clock& c) : clock(c) {}

    void unpark() {
      if (parked) {
        parked = false;
        clock.hold();
      }
      cv.notify_all();
    }

    Clock& clock;
    mutable std::mutex mutex;
    std::condition_variable cv;
    std::deque<T> items;
    bool closed = false;
    bool parked = false;
    bool timer_woke = false;
    std::uint64_t generation = 0;
  };

  std::shared_ptr<State> state_;
};

}  // namespace sar
