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

#include "sar/wire/frame.hpp"

#include <optional>

namespace sar::wire {

FrameTooLarge::FrameTooLarge(std::uint32_t length, std::uint32_t limit)
    : std::runtime_error("frame of " + std::to_string(length) + " bytes exceeds limit " +
                         std::to_string(limit)),
      length_(length) {}

std::vector<std::uint8_t> encode_raw_frame(std::string_view payload) {
  if (payload.size() > UINT32_MAX) throw SerializationError("payload too large for a frame");
  auto n = static_cast<std::uint32_t>(payload.size());
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderBytes + payload.size());
  out.push_back(static_cast<std::uint8_t>(n >> 24));
  out.push_back(static_cast<std::uint8_t>(n >> 16));
  out.push_back(static_cast<std::uint8_t>(n >> 8));
  out.push_back(static_cast<std::uint8_t>(n));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

std::string serialize(const Message& message) {
  try {
    return to_json(message).dump();
  } catch (const nlohmann::json::exception& e) {
    // Invalid UTF-8 in a string field.
    throw SerializationError(e.what());
  }
}

std::vector<std::uint8_t> encode_frame(const Message& message) {
  return encode_raw_frame(serialize(message));
}

DecodeResult decode_frame(std::span<const std::uint8_t> buffer, std::uint32_t max_frame_bytes) {
  if (buffer.size() < kFrameHeaderBytes) return NeedMoreData{};
  std::uint32_t length = (std::uint32_t{buffer[0]} << 24) | (std::uint32_t{buffer[1]} << 16) |
                         (std::uint32_t{buffer[2]} << 8) | std::uint32_t{buffer[3]};
  if (length > max_frame_bytes) throw FrameTooLarge(length, max_frame_bytes);
  std::size_t total = kFrameHeaderBytes + length;
  if (buffer.size() < total) return NeedMoreData{};

  auto payload = buffer.subspan(kFrameHeaderBytes, length);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(payload.begin(), payload.end());
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFrame(std::string("payload is not valid JSON: ") + e.what(), total);
  }
  try {
    return DecodedFrame{from_json(j), total};
  } catch (const std::exception& e) {
    throw MalformedFrame(std::string("invalid message: ") + e.what(), total);
  }
}

void FrameDecoder::append(std::span<const std::uint8_t> bytes) {
  if (offset_ > 0 && offset_ == buffer_.size()) {
    buffer_.clear();
    offset_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

void FrameDecoder::append(std::string_view bytes) {
  append(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

std::optional<Message> FrameDecoder::next() {
  std::span<const std::uint8_t> pending(buffer_.data() + offset_, buffer_.size() - offset_);
  DecodeResult result;
  try {
    result = decode_frame(pending, max_frame_bytes_);
  } catch (const MalformedFrame& e) {
    offset_ += e.consumed();
    throw;
  }
  if (std::holds_alternative<NeedMoreData>(result)) {
    if (offset_ > 0) {
      buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(offset_));
      offset_ = 0;
    }
    return std::nullopt;
  }
  auto& decoded = std::get<DecodedFrame>(result);
  offset_ += decoded.consumed;
  return std::move(decoded.message);
}

}  // namespace sar::wire
