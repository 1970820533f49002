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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "sar/behavior/command.hpp"
#include "sar/cognition/emotion.hpp"

namespace sar::wire {

enum class MessageType {
  kHello,
  kImageRequest,
  kEmotionResult,
  kAudioStart,
  kAudioFragment,
  kAudioEnd,
  kUtteranceResult,
  kBehavior,
  kError,
};

std::string_view message_type_name(MessageType type);
std::optional<MessageType> parse_message_type(std::string_view name);

/// Opens a session for `child_id`. Robot to gateway.
struct Hello {
  std::string robot_id;
  std::string child_id;
  bool operator==(const Hello&) const = default;
};

/// Raw RGB image, width * height * 3 bytes.
struct ImageRequest {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;
  bool operator==(const ImageRequest&) const = default;
};

/// Exactly one of `scores` and `error` is set; `error` is always "message error".
struct EmotionResult {
  ServiceKind service = ServiceKind::kMock;
  std::optional<EmotionVector> scores;
  std::optional<std::string> error;
  bool operator==(const EmotionResult&) const = default;
};

struct AudioStart {
  std::string utterance_id;
  std::uint32_t sample_rate_hz = 16000;
  bool operator==(const AudioStart&) const = default;
};

/// PCM is signed 16-bit; it travels base64-encoded as little-endian bytes.
struct AudioFragment {
  std::string utterance_id;
  std::uint32_t index = 0;
  std::vector<std::int16_t> pcm;
  bool operator==(const AudioFragment&) const = default;
};

struct AudioEnd {
  std::string utterance_id;
  std::uint32_t fragment_count = 0;
  bool operator==(const AudioEnd&) const = default;
};

struct UtteranceResult {
  std::string utterance_id;
  std::string transcript;
  double sentiment = 0.5;
  bool operator==(const UtteranceResult&) const = default;
};

/// `reply_to` names the request frame this answers; unsolicited behaviors
/// (script steps pushed by an operator) carry none.
struct Behavior {
  BehaviorCommand command;
  std::optional<std::uint64_t> reply_to;
  bool operator==(const Behavior&) const = default;
};

struct Error {
  std::string message;
  std::optional<std::uint64_t> reply_to;
  bool operator==(const Error&) const = default;
};

// Alternative order matches MessageType.
using Body = std::variant<Hello, ImageRequest, EmotionResult, AudioStart, AudioFragment,
                          AudioEnd, UtteranceResult, Behavior, Error>;

struct Message {
  std::uint64_t seq = 0;
  Body body;

  MessageType type() const { return static_cast<MessageType>(body.index()); }
  bool operator==(const Message&) const = default;
};

class SerializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws SerializationError when the body violates its schema.
nlohmann::json to_json(const Message& message);

/// Throws std::invalid_argument (with a reason) when `j` is not a valid message.
Message from_json(const nlohmann::json& j);

}  // namespace sar::wire
