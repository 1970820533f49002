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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

namespace sar {

using Duration = std::chrono::microseconds;
using TimePoint = std::chrono::sys_time<Duration>;

inline std::int64_t to_micros(TimePoint t) { return t.time_since_epoch().count(); }
inline TimePoint from_micros(std::int64_t us) { return TimePoint{Duration{us}}; }

/// Monotonic time source shared by every component of a gateway or simulator.
///
/// Besides reading time and sleeping, a clock can run timer callbacks. Simulated
/// clocks additionally track which participants are runnable through hold() and
/// release(): time only moves forward while no participant holds the clock.
class Clock {
 public:
  using TimerId = std::uint64_t;

  virtual ~Clock() = default;

  virtual TimePoint now() const = 0;
  virtual void sleep_until(TimePoint deadline) = 0;
  void sleep_for(Duration d) { sleep_until(now() + d); }

  virtual void hold() {}
  virtual void release() {}

  /// Runs `fn` once `deadline` is reached. On a simulated clock the callback is
  /// invoked with one hold taken on behalf of whoever it wakes; it must either
  /// keep that hold alive through the woken party or call release().
  virtual TimerId schedule(TimePoint deadline, std::function<void()> fn) = 0;

  /// Returns false when the timer already fired or never existed.
  virtual bool cancel(TimerId id) = 0;
};

/// RAII hold on a clock.
class ClockHold {
 public:
  explicit ClockHold(Clock& clock) : clock_(&clock) { clock_->hold(); }
  ~ClockHold() {
    if (clock_ != nullptr) clock_->release();
  }
  ClockHold(const ClockHold&) = delete;
  ClockHold& operator=(const ClockHold&) = delete;

 private:
  Clock* clock_;
};

/// Starts `fn` on a new thread that participates in `clock`: the hold is taken
/// here, before the thread exists, and dropped when `fn` returns.
template <typename Fn>
std::thread spawn_participant(Clock& clock, Fn fn) {
  clock.hold();
  return std::thread([&clock, fn = std::move(fn)]() mutable {
    try {
      fn();
    } catch (...) {
      clock.release();
      throw;
    }
    clock.release();
  });
}

/// Wall-aligned monotonic clock: steady_clock offset by the wall time at construction.
class SystemClock final : public Clock {
 public:
  SystemClock();
  ~SystemClock() override;

  TimePoint now() const override;
  void sleep_until(TimePoint deadline) override;
  TimerId schedule(TimePoint deadline, std::function<void()> fn) override;
  bool cancel(TimerId id) override;

 private:
  void timer_loop(std::stop_token stop);

  TimePoint origin_;
  std::chrono::steady_clock::time_point steady_origin_;

  std::mutex mutex_;
  std::condition_variable_any cv_;
  std::map<std::pair<TimePoint, TimerId>, std::function<void()>> timers_;
  std::map<TimerId, TimePoint> deadlines_;
  TimerId next_id_ = 1;
  std::jthread worker_;
};

/// Discrete-event clock for deterministic tests.
///
/// Time starts at `start` and jumps straight to the earliest pending timer as
/// soon as every participant has released the clock. The constructing thread
/// counts as one holding participant.
class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(TimePoint start = TimePoint{});
  ~VirtualClock() override;

  TimePoint now() const override;
  void sleep_until(TimePoint deadline) override;
  void hold() override;
  void release() override;
  TimerId schedule(TimePoint deadline, std::function<void()> fn) override;
  bool cancel(TimerId id) override;

  int holders() const;

 private:
  void scheduler_loop();

  mutable std::mutex mutex_;
  std::condition_variable cv_;
  TimePoint now_;
  int active_ = 1;
  bool stop_ = false;
  std::map<std::pair<TimePoint, TimerId>, std::function<void()>> timers_;
  std::map<TimerId, TimePoint> deadlines_;
  TimerId next_id_ = 1;
  std::thread scheduler_;
};

}  // namespace sar
