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

#include "sar/common/clock.hpp"

#include <utility>
#include <vector>

namespace sar {

SystemClock::SystemClock()
    : origin_(std::chrono::time_point_cast<Duration>(std::chrono::system_clock::now())),
      steady_origin_(std::chrono::steady_clock::now()) {}

SystemClock::~SystemClock() {
  if (worker_.joinable()) {
    worker_.request_stop();
    cv_.notify_all();
  }
}

TimePoint SystemClock::now() const {
  auto elapsed = std::chrono::steady_clock::now() - steady_origin_;
  return origin_ + std::chrono::duration_cast<Duration>(elapsed);
}

void SystemClock::sleep_until(TimePoint deadline) {
  auto remaining = deadline - now();
  if (remaining > Duration::zero()) std::this_thread::sleep_for(remaining);
}

SystemClock::TimerId SystemClock::schedule(TimePoint deadline, std::function<void()> fn) {
  std::lock_guard lock(mutex_);
  if (!worker_.joinable()) {
    worker_ = std::jthread([this](std::stop_token stop) { timer_loop(stop); });
  }
  TimerId id = next_id_++;
  timers_.emplace(std::pair{deadline, id}, std::move(fn));
  deadlines_.emplace(id, deadline);
  cv_.notify_all();
  return id;
}

bool SystemClock::cancel(TimerId id) {
  std::lock_guard lock(mutex_);
  auto it = deadlines_.find(id);
  if (it == deadlines_.end()) return false;
  timers_.erase({it->second, id});
  deadlines_.erase(it);
  return true;
}

void SystemClock::timer_loop(std::stop_token stop) {
  std::unique_lock lock(mutex_);
  while (!stop.stop_requested()) {
    if (timers_.empty()) {
      cv_.wait(lock, stop, [&] { return !timers_.empty(); });
      continue;
    }
    auto first = timers_.begin();
    auto deadline = first->first.first;
    auto current = now();
    if (deadline > current) {
      auto steady_deadline = std::chrono::steady_clock::now() + (deadline - current);
      cv_.wait_until(lock, stop, steady_deadline, [&] {
        return !timers_.empty() && timers_.begin()->first.first < deadline;
      });
      continue;
    }
    auto fn = std::move(first->second);
    deadlines_.erase(first->first.second);
    timers_.erase(first);
    lock.unlock();
    fn();
    lock.lock();
  }
}

VirtualClock::VirtualClock(TimePoint start) : now_(start) {
  scheduler_ = std::thread([this] { scheduler_loop(); });
}

VirtualClock::~VirtualClock() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  cv_.notify_all();
  scheduler_.join();
}

TimePoint VirtualClock::now() const {
  std::lock_guard lock(mutex_);
  return now_;
}

void VirtualClock::sleep_until(TimePoint deadline) {
  std::mutex m;
  std::condition_variable woken_cv;
  bool woken = false;
  {
    std::lock_guard lock(mutex_);
    if (deadline <= now_) return;
  }
  schedule(deadline, [&] {
    std::lock_guard lock(m);
    woken = true;
    woken_cv.notify_all();
  });
  release();
  std::unique_lock lock(m);
  woken_cv.wait(lock, [&] { return woken; });
}

void VirtualClock::hold() {
  std::lock_guard lock(mutex_);
  ++active_;
}

void VirtualClock::release() {
  {
    std::lock_guard lock(mutex_);
    --active_;
  }
  cv_.notify_all();
}

int VirtualClock::holders() const {
  std::lock_guard lock(mutex_);
  return active_;
}

VirtualClock::TimerId VirtualClock::schedule(TimePoint deadline, std::function<void()> fn) {
  TimerId id;
  {
    std::lock_guard lock(mutex_);
    id = next_id_++;
    timers_.emplace(std::pair{deadline, id}, std::move(fn));
    deadlines_.emplace(id, deadline);
  }
  cv_.notify_all();
  return id;
}

bool VirtualClock::cancel(TimerId id) {
  std::lock_guard lock(mutex_);
  auto it = deadlines_.find(id);
  if (it == deadlines_.end()) return false;
  timers_.erase({it->second, id});
  deadlines_.erase(it);
  return true;
}

void VirtualClock::scheduler_loop() {
  std::unique_lock lock(mutex_);
  while (true) {
    cv_.wait(lock, [&] { return stop_ || (active_ <= 0 && !timers_.empty()); });
    if (stop_) return;
    auto deadline = timers_.begin()->first.first;
    if (deadline > now_) now_ = deadline;
    std::vector<std::function<void()>> due;
    while (!timers_.empty() && timers_.begin()->first.first <= now_) {
      auto first = timers_.begin();
      due.push_back(std::move(first->second));
      deadlines_.erase(first->first.second);
      timers_.erase(first);
    }
    active_ += static_cast<int>(due.size());
    lock.unlock();
    for (auto& fn : due) fn();
    lock.lock();
  }
}

}  // namespace sar
