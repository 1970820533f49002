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
#include <string_view>
#include <utility>

#include "sar/common/channel.hpp"
#include "sar/common/clock.hpp"

namespace sar::net {

class StreamClosed : public std::runtime_error {
 public:
  StreamClosed() : std::runtime_error("stream closed") {}
};

/// Full-duplex byte stream between a robot and the gateway.
class ByteStream {
 public:
  virtual ~ByteStream() = default;

  /// Throws StreamClosed when the write side is gone.
  virtual void write(std::string_view bytes) = 0;

  /// Blocks for the next chunk; nullopt once the peer has shut down its write side.
  virtual std::optional<std::string> read_some() = 0;

  /// Half-close: the peer reads EOF, reading here keeps working.
  virtual void shutdown_write() = 0;

  /// Tears down both directions and unblocks a pending read.
  virtual void close() = 0;
};

/// Two connected in-process streams. Blocking reads cooperate with simulated
/// time through Channel.
std::pair<std::shared_ptr<ByteStream>, std::shared_ptr<ByteStream>> make_loopback_pair(Clock& clock);

class TcpStream final : public ByteStream {
 public:
  explicit TcpStream(int fd) : fd_(fd) {}
  ~TcpStream() override;

  /// Throws std::runtime_error when the connection cannot be established.
  static std::shared_ptr<TcpStream> connect(const std::string& host, int port);

  void write(std::string_view bytes) override;
  std::optional<std::string> read_some() override;
  void shutdown_write() override;
  void close() override;

 private:
  int fd_;
  std::mutex write_mutex_;
};

/// Listening socket on 0.0.0.0 (or the given address). Port 0 picks a free port.
class TcpListener {
 public:
  explicit TcpListener(int port, const std::string& address = "0.0.0.0");
  ~TcpListener();

  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  int port() const { return port_; }

  /// Blocks for the next connection; nullptr once close() was called.
  std::shared_ptr<TcpStream> accept();
  void close();

 private:
  int fd_ = -1;
  int port_ = 0;
};

}  // namespace sar::net
