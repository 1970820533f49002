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

#include <gtest/gtest.h>

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "sar/common/channel.hpp"
#include "sar/common/clock.hpp"
#include "sar/common/encoding.hpp"
#include "sar/common/worker_pool.hpp"

namespace sar {
namespace {

using namespace std::chrono_literals;

TEST(Base64, KnownVectors) {
  EXPECT_EQ(base64_encode(as_bytes("")), "");
  EXPECT_EQ(base64_encode(as_bytes("f")), "Zg==");
  EXPECT_EQ(base64_encode(as_bytes("fo")), "Zm8=");
  EXPECT_EQ(base64_encode(as_bytes("foo")), "Zm9v");
  EXPECT_EQ(base64_encode(as_bytes("foobar")), "Zm9vYmFy");
}

TEST(Base64, RoundTripsEveryLength) {
  std::vector<std::uint8_t> bytes;
  for (int n = 0; n < 64; ++n) {
    EXPECT_EQ(base64_decode(base64_encode(bytes)), bytes) << "length " << n;
    bytes.push_back(static_cast<std::uint8_t>(n * 37 + 11));
  }
}

TEST(Base64, RejectsMalformedInput) {
  EXPECT_THROW(base64_decode("abc"), std::invalid_argument);
  EXPECT_THROW(base64_decode("ab!d"), std::invalid_argument);
}

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(sha256_hex(as_bytes("")), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex(as_bytes("abc")), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(VirtualClock, SleepJumpsStraightToTheDeadline) {
  VirtualClock clock(from_micros(1000));
  auto wall = std::chrono::steady_clock::now();
  clock.sleep_for(10s);
  EXPECT_EQ(to_micros(clock.now()), 1000 + 10'000'000);
  EXPECT_LT(std::chrono::steady_clock::now() - wall, 1s);
}

TEST(VirtualClock, TimersFireInDeadlineOrder) {
  VirtualClock clock;
  std::vector<int> order;
  std::mutex m;
  for (int i : {3, 1, 2}) {
    clock.schedule(from_micros(i * 100), [&, i] {
      std::lock_guard g(m);
      order.push_back(i);
      clock.release();
    });
  }
  clock.sleep_until(from_micros(1000));
  EXPECT_EQ(order, (std::vector<int>{1, 2, 3}));
}

TEST(VirtualClock, CancelledTimerNeverFires) {
  VirtualClock clock;
  std::atomic<bool> fired{false};
  auto id = clock.schedule(from_micros(50), [&] {
    fired = true;
    clock.release();
  });
  EXPECT_TRUE(clock.cancel(id));
  EXPECT_FALSE(clock.cancel(id));
  clock.sleep_until(from_micros(100));
  EXPECT_FALSE(fired);
}

TEST(VirtualClock, TimeWaitsForEveryParticipant) {
  VirtualClock clock;
  std::atomic<bool> worker_done{false};
  auto t = spawn_participant(clock, [&] {
    std::this_thread::sleep_for(50ms);  // real work: virtual time must not move meanwhile
    worker_done = true;
  });
  clock.sleep_for(1ms);
  EXPECT_TRUE(worker_done);
  t.join();
}

TEST(Channel, PopReturnsValuesInOrderThenClosed) {
  VirtualClock clock;
  Channel<int> ch(clock);
  ch.push(1);
  ch.push(2);
  ch.close();
  EXPECT_EQ(ch.pop(), 1);
  EXPECT_EQ(ch.pop(), 2);
  EXPECT_EQ(ch.pop(), std::nullopt);
}

TEST(Channel, TimeoutUsesVirtualTime) {
  VirtualClock clock;
  Channel<int> ch(clock);
  int out = 0;
  auto start = clock.now();
  EXPECT_EQ(ch.pop_until(start + 250ms, out), PopStatus::kTimeout);
  EXPECT_EQ(clock.now() - start, 250ms);
}

TEST(Channel, ProducerWakesConsumerAtItsVirtualTime) {
  VirtualClock clock;
  Channel<int> ch(clock);
  auto producer = spawn_participant(clock, [&] {
    clock.sleep_for(40ms);
    ch.push(7);
  });
  int out = 0;
  auto start = clock.now();
  EXPECT_EQ(ch.pop_until(start + 1s, out), PopStatus::kValue);
  EXPECT_EQ(out, 7);
  EXPECT_EQ(clock.now() - start, 40ms);
  clock.release();
  producer.join();
  clock.hold();
}

TEST(WorkerPool, OverlappingTasksShareVirtualTime) {
  VirtualClock clock;
  WorkerPool pool(clock, 4);
  Channel<TimePoint> done(clock);
  auto start = clock.now();
  for (int i = 0; i < 4; ++i) {
    pool.submit([&] {
      clock.sleep_for(200ms);
      done.push(clock.now());
    });
  }
  for (int i = 0; i < 4; ++i) {
    auto t = done.pop();
    ASSERT_TRUE(t);
    EXPECT_EQ(*t - start, 200ms);
  }
}

TEST(WorkerPool, ThrowingTaskDoesNotStopTheWorker) {
  VirtualClock clock;
  WorkerPool pool(clock, 1);
  Channel<int> done(clock);
  pool.submit([] { throw std::runtime_error("boom"); });
  pool.submit([&] { done.push(1); });
  EXPECT_EQ(done.pop(), 1);
}

TEST(SystemClock, TimerFiresAfterDeadline) {
  SystemClock clock;
  std::atomic<bool> fired{false};
  auto deadline = clock.now() + 20ms;
  clock.schedule(deadline, [&] { fired = true; });
  clock.sleep_until(deadline + 30ms);
  EXPECT_TRUE(fired);
  EXPECT_GE(clock.now(), deadline);
}

}  // namespace
}  // namespace sar
