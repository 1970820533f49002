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

#include "sar/wire/message.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "sar/audio/pcm.hpp"
#include "sar/common/encoding.hpp"

namespace sar::wire {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 9> kTypeNames = {
    "hello",     "image_request",  "emotion_result",  "audio_start", "audio_fragment",
    "audio_end", "utterance_result", "behavior",      "error"};

void require(bool condition, const char* what) {
  if (!condition) throw std::invalid_argument(what);
}

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_string()) throw std::invalid_argument(std::string("field '") + key + "' is not a string");
  return v.get<std::string>();
}

std::uint32_t u32_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument(std::string("field '") + key + "' is not an unsigned 32-bit integer");
  }
  return v.get<std::uint32_t>();
}

std::optional<std::uint64_t> optional_seq(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (!it->is_number_unsigned()) throw std::invalid_argument(std::string("field '") + key + "' is not unsigned");
  return it->get<std::uint64_t>();
}

double unit_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number()) throw std::invalid_argument(std::string("field '") + key + "' is not a number");
  double d = v.get<double>();
  if (!in_unit_interval(d)) throw std::invalid_argument(std::string("field '") + key + "' outside [0,1]");
  return d;
}

std::vector<std::uint8_t> base64_field(const json& obj, const char* key) {
  return base64_decode(string_field(obj, key));
}

json scores_to_json(const EmotionVector& values) {
  json out = json::object();
  for (Emotion e : kEmotions) out[std::string(emotion_name(e))] = values[index_of(e)];
  return out;
}

EmotionVector scores_from_json(const json& j) {
  require(j.is_object(), "scores is not an object");
  require(j.size() == kEmotionCount, "scores must hold exactly the six emotions");
  EmotionVector out{};
  for (Emotion e : kEmotions) out[index_of(e)] = unit_field(j, std::string(emotion_name(e)).c_str());
  return out;
}

struct BodyWriter {
  json operator()(const Hello& b) const { return {{"robot_id", b.robot_id}, {"child_id", b.child_id}}; }

  json operator()(const ImageRequest& b) const {
    return {{"width", b.width}, {"height", b.height}, {"pixels", base64_encode(b.pixels)}};
  }

  json operator()(const EmotionResult& b) const {
    if (b.scores.has_value() == b.error.has_value()) {
      throw SerializationError("emotion_result needs exactly one of scores and error");
    }
    json out = {{"service", std::string(service_name(b.service))}};
    if (b.scores) {
      for (double v : *b.scores) {
        if (!in_unit_interval(v)) throw SerializationError("emotion score outside [0,1]");
      }
      out["scores"] = scores_to_json(*b.scores);
    } else {
      if (*b.error != kMessageError) throw SerializationError("emotion_result error text must be 'message error'");
      out["error"] = *b.error;
    }
    return out;
  }

  json operator()(const AudioStart& b) const {
    if (b.sample_rate_hz == 0) throw SerializationError("sample rate must be positive");
    return {{"utterance_id", b.utterance_id}, {"sample_rate_hz", b.sample_rate_hz}};
  }

  json operator()(const AudioFragment& b) const {
    return {{"utterance_id", b.utterance_id},
            {"index", b.index},
            {"pcm_s16le", base64_encode(audio::pcm_to_le_bytes(b.pcm))}};
  }

  json operator()(const AudioEnd& b) const {
    return {{"utterance_id", b.utterance_id}, {"fragment_count", b.fragment_count}};
  }

  json operator()(const UtteranceResult& b) const {
    if (!in_unit_interval(b.sentiment)) throw SerializationError("sentiment outside [0,1]");
    return {{"utterance_id", b.utterance_id}, {"transcript", b.transcript}, {"sentiment", b.sentiment}};
  }

  json operator()(const Behavior& b) const {
    const auto& c = b.command;
    json out = {{"kind", std::string(behavior_kind_name(c.kind))}};
    if (c.kind == BehaviorKind::kAnimation) {
      if (c.animation_id.empty()) throw SerializationError("animation behavior needs an animation_id");
      out["animation_id"] = c.animation_id;
    } else {
      out["text"] = c.text;
    }
    if (b.reply_to) out["reply_to"] = *b.reply_to;
    return out;
  }

  json operator()(const Error& b) const {
    json out = {{"message", b.message}};
    if (b.reply_to) out["reply_to"] = *b.reply_to;
    return out;
  }
};

Body body_from_json(MessageType type, const json& b) {
  require(b.is_object(), "body is not an object");
  switch (type) {
    case MessageType::kHello:
      return Hello{string_field(b, "robot_id"), string_field(b, "child_id")};
    case MessageType::kImageRequest: {
      ImageRequest r;
      r.width = u32_field(b, "width");
      r.height = u32_field(b, "height");
      r.pixels = base64_field(b, "pixels");
      return r;
    }
    case MessageType::kEmotionResult: {
      EmotionResult r;
      auto service = parse_service(string_field(b, "service"));
      require(service.has_value(), "unknown service");
      r.service = *service;
      bool has_scores = b.contains("scores");
      bool has_error = b.contains("error");
      require(has_scores != has_error, "emotion_result needs exactly one of scores and error");
      if (has_scores) {
        r.scores = scores_from_json(b.at("scores"));
      } else {
        r.error = string_field(b, "error");
        require(*r.error == kMessageError, "emotion_result error text must be 'message error'");
      }
      return r;
    }
    case MessageType::kAudioStart: {
      AudioStart r{string_field(b, "utterance_id"), u32_field(b, "sample_rate_hz")};
      require(r.sample_rate_hz > 0, "sample rate must be positive");
      return r;
    }
    case MessageType::kAudioFragment: {
      auto bytes = base64_field(b, "pcm_s16le");
      require(bytes.size() % 2 == 0, "pcm byte count must be even");
      return AudioFragment{string_field(b, "utterance_id"), u32_field(b, "index"),
                           audio::pcm_from_le_bytes(bytes)};
    }
    case MessageType::kAudioEnd:
      return AudioEnd{string_field(b, "utterance_id"), u32_field(b, "fragment_count")};
    case MessageType::kUtteranceResult:
      return UtteranceResult{string_field(b, "utterance_id"), string_field(b, "transcript"),
                             unit_field(b, "sentiment")};
    case MessageType::kBehavior: {
      auto kind = parse_behavior_kind(string_field(b, "kind"));
      require(kind.has_value(), "unknown behavior kind");
      BehaviorCommand c;
      c.kind = *kind;
      if (c.kind == BehaviorKind::kAnimation) {
        c.animation_id = string_field(b, "animation_id");
        require(!c.animation_id.empty(), "empty animation_id");
      } else {
        c.text = string_field(b, "text");
      }
      return Behavior{c, optional_seq(b, "reply_to")};
    }
    case MessageType::kError:
      return Error{string_field(b, "message"), optional_seq(b, "reply_to")};
  }
  throw std::invalid_argument("unknown message type");
}

}  // namespace

std::string_view message_type_name(MessageType type) {
  return kTypeNames[static_cast<std::size_t>(type)];
}

std::optional<MessageType> parse_message_type(std::string_view name) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == name) return static_cast<MessageType>(i);
  }
  return std::nullopt;
}

nlohmann::json to_json(const Message& message) {
  return {{"type", std::string(message_type_name(message.type()))},
          {"seq", message.seq},
          {"body", std::visit(BodyWriter{}, message.body)}};
}

Message from_json(const nlohmann::json& j) {
  require(j.is_object(), "message is not an object");
  auto type = parse_message_type(string_field(j, "type"));
  require(type.has_value(), "unknown message type");
  const json& seq = field(j, "seq");
  require(seq.is_number_unsigned(), "seq is not an unsigned integer");
  return Message{seq.get<std::uint64_t>(), body_from_json(*type, field(j, "body"))};
}

}  // namespace sar::wire
