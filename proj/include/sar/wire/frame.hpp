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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sar/wire/message.hpp"

namespace sar::wire {

inline constexpr std::size_t kFrameHeaderBytes = 4;
inline constexpr std::uint32_t kDefaultMaxFrameBytes = 16u * 1024u * 1024u;

/// The payload of a complete frame did not hold a valid message. `consumed`
/// is the size of the offending frame so a stream can skip past it.
class MalformedFrame : public std::runtime_error {
 public:
  MalformedFrame(const std::string& what, std::size_t consumed)
      : std::runtime_error(what), consumed_(consumed) {}
  std::size_t consumed() const { return consumed_; }

 private:
  std::size_t consumed_;
};

class FrameTooLarge : public std::runtime_error {
 public:
  FrameTooLarge(std::uint32_t length, std::uint32_t limit);
  std::uint32_t length() const { return length_; }

 private:
  std::uint32_t length_;
};

struct NeedMoreData {
  bool operator==(const NeedMoreData&) const = default;
};

struct DecodedFrame {
  Message message;
  std::size_t consumed = 0;
};

using DecodeResult = std::variant<NeedMoreData, DecodedFrame>;

/// Length prefix (big-endian u32) followed by `payload`.
std::vector<std::uint8_t> encode_raw_frame(std::string_view payload);

/// Canonical compact JSON serialization of `message`.
std::string serialize(const Message& message);

std::vector<std::uint8_t> encode_frame(const Message& message);

DecodeResult decode_frame(std::span<const std::uint8_t> buffer,
                          std::uint32_t max_frame_bytes = kDefaultMaxFrameBytes);

/// Incremental decoder for one direction of a connection.
class FrameDecoder {
 public:
  explicit FrameDecoder(std::uint32_t max_frame_bytes = kDefaultMaxFrameBytes)
      : max_frame_bytes_(max_frame_bytes) {}

  void append(std::span<const std::uint8_t> bytes);
  void append(std::string_view bytes);

  /// Next complete message, or nullopt when more bytes are needed. A malformed
  /// frame is dropped from the buffer before MalformedFrame propagates.
  std::optional<Message> next();

  std::size_t buffered() const { return buffer_.size() - offset_; }

 private:
  std::uint32_t max_frame_bytes_;
  std::vector<std::uint8_t> buffer_;
  std::size_t offset_ = 0;
};

}  // namespace sar::wire
