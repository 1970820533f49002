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

#include "sar/gateway/stream.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <cerrno>
#include <cstring>

namespace sar::net {
namespace {

class LoopbackStream final : public ByteStream {
 public:
  LoopbackStream(std::shared_ptr<Channel<std::string>> inbound, std::shared_ptr<Channel<std::string>> outbound)
      : inbound_(std::move(inbound)), outbound_(std::move(outbound)) {}

  ~LoopbackStream() override { outbound_->close(); }

  void write(std::string_view bytes) override {
    if (outbound_->closed()) throw StreamClosed();
    outbound_->push(std::string(bytes));
  }

  std::optional<std::string> read_some() override { return inbound_->pop(); }

  void shutdown_write() override { outbound_->close(); }

  void close() override {
    outbound_->close();
    inbound_->close();
  }

 private:
  std::shared_ptr<Channel<std::string>> inbound_;
  std::shared_ptr<Channel<std::string>> outbound_;
};

std::runtime_error socket_error(const std::string& what) {
  return std::runtime_error(what + ": " + std::strerror(errno));
}

}  // namespace

std::pair<std::shared_ptr<ByteStream>, std::shared_ptr<ByteStream>> make_loopback_pair(Clock& clock) {
  auto a_to_b = std::make_shared<Channel<std::string>>(clock);
  auto b_to_a = std::make_shared<Channel<std::string>>(clock);
  return {std::make_shared<LoopbackStream>(b_to_a, a_to_b), std::make_shared<LoopbackStream>(a_to_b, b_to_a)};
}

TcpStream::~TcpStream() {
  if (fd_ >= 0) ::close(fd_);
}

std::shared_ptr<TcpStream> TcpStream::connect(const std::string& host, int port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  auto service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &result); rc != 0) {
    throw std::runtime_error("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(result);
  if (fd < 0) throw socket_error("cannot connect to " + host + ":" + service);
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return std::make_shared<TcpStream>(fd);
}

void TcpStream::write(std::string_view bytes) {
  std::lock_guard guard(write_mutex_);
  while (!bytes.empty()) {
    ssize_t n = ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw StreamClosed();
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

std::optional<std::string> TcpStream::read_some() {
  std::array<char, 64 * 1024> buf{};
  while (true) {
    ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
    if (n > 0) return std::string(buf.data(), static_cast<std::size_t>(n));
    if (n == 0) return std::nullopt;
    if (errno == EINTR) continue;
    return std::nullopt;
  }
}

void TcpStream::shutdown_write() { ::shutdown(fd_, SHUT_WR); }

void TcpStream::close() { ::shutdown(fd_, SHUT_RDWR); }

TcpListener::TcpListener(int port, const std::string& address) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw socket_error("socket");
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, address.c_str(), &addr.sin_addr) != 1) {
    ::close(fd_);
    throw std::runtime_error("bad listen address " + address);
  }
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 || ::listen(fd_, 16) != 0) {
    auto err = socket_error("cannot listen on port " + std::to_string(port));
    ::close(fd_);
    throw err;
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::shared_ptr<TcpStream> TcpListener::accept() {
  while (true) {
    int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) {
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return std::make_shared<TcpStream>(fd);
    }
    if (errno == EINTR || errno == ECONNABORTED) continue;
    return nullptr;
  }
}

void TcpListener::close() { ::shutdown(fd_, SHUT_RDWR); }

}  // namespace sar::net
