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

#include <random>
#include <string>
#include <vector>

#include "sar/wire/frame.hpp"
#include "sar/wire/message.hpp"

namespace sar::wire {
namespace {

std::vector<std::uint8_t> bytes_of(std::string_view s) { return {s.begin(), s.end()}; }

std::string random_text(std::mt19937_64& rng) {
  static const std::string alphabet = "abcdefghijklmnopqrstuvwxyz ABC-_0123456789\"\\/\xc3\xa9";
  std::uniform_int_distribution<std::size_t> len(0, 12);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 3);
  std::string out;
  for (std::size_t i = 0, n = len(rng); i < n; ++i) out += alphabet[pick(rng)];
  if (rng() % 4 == 0) out += "\xc3\xa9";  // keep UTF-8 valid: append a whole code point
  return out;
}

EmotionVector random_scores(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EmotionVector v{};
  for (double& x : v) x = u(rng);
  return v;
}

Message random_message(std::mt19937_64& rng, std::uint64_t seq) {
  std::uniform_int_distribution<int> type(0, 8);
  std::uniform_int_distribution<std::uint32_t> u32(0, 100000);
  Message m;
  m.seq = seq;
  switch (type(rng)) {
    case 0:
      m.body = Hello{random_text(rng), random_text(rng)};
      break;
    case 1: {
      ImageRequest r{u32(rng) % 8, u32(rng) % 8, {}};
      for (std::uint32_t i = 0; i < r.width * r.height * 3; ++i) r.pixels.push_back(static_cast<std::uint8_t>(rng()));
      m.body = r;
      break;
    }
    case 2:
      if (rng() % 2 == 0) {
        m.body = EmotionResult{ServiceKind::kMock, random_scores(rng), std::nullopt};
      } else {
        m.body = EmotionResult{ServiceKind::kRemote, std::nullopt, std::string(kMessageError)};
      }
      break;
    case 3:
      m.body = AudioStart{random_text(rng), 8000 + u32(rng)};
      break;
    case 4: {
      AudioFragment f{random_text(rng), u32(rng), {}};
      for (int i = 0, n = static_cast<int>(rng() % 64); i < n; ++i) f.pcm.push_back(static_cast<std::int16_t>(rng()));
      m.body = f;
      break;
    }
    case 5:
      m.body = AudioEnd{random_text(rng), u32(rng)};
      break;
    case 6:
      m.body = UtteranceResult{random_text(rng), random_text(rng), std::uniform_real_distribution<double>(0, 1)(rng)};
      break;
    case 7: {
      BehaviorCommand c;
      switch (rng() % 3) {
        case 0:
          c = BehaviorCommand::animation("anim_" + random_text(rng));
          break;
        case 1:
          c = BehaviorCommand::speech(random_text(rng));
          break;
        default:
          c = BehaviorCommand::retry_prompt(random_text(rng));
      }
      std::optional<std::uint64_t> reply_to;
      if (rng() % 2 == 0) reply_to = rng() % 1000;
      m.body = Behavior{c, reply_to};
      break;
    }
    default:
      m.body = Error{random_text(rng), rng() % 2 == 0 ? std::optional<std::uint64_t>(rng() % 1000) : std::nullopt};
  }
  return m;
}

TEST(Frame, EmptyObjectPayloadIsBitExact) {
  EXPECT_EQ(encode_raw_frame("{}"), (std::vector<std::uint8_t>{0x00, 0x00, 0x00, 0x02, 0x7B, 0x7D}));
}

TEST(Frame, PrefixEqualsCanonicalPayloadLength) {
  Message hello{0, Hello{"r1", "c1"}};
  // Independently written canonical form: sorted keys, no whitespace.
  const std::string expected = R"({"body":{"child_id":"c1","robot_id":"r1"},"seq":0,"type":"hello"})";
  EXPECT_EQ(serialize(hello), expected);
  auto frame = encode_frame(hello);
  ASSERT_EQ(frame.size(), 4 + expected.size());
  std::uint32_t prefix = (std::uint32_t{frame[0]} << 24) | (std::uint32_t{frame[1]} << 16) |
                         (std::uint32_t{frame[2]} << 8) | std::uint32_t{frame[3]};
  EXPECT_EQ(prefix, expected.size());
}

TEST(Frame, ShortBufferNeedsMoreData) {
  std::vector<std::uint8_t> three{0, 0, 0};
  EXPECT_TRUE(std::holds_alternative<NeedMoreData>(decode_frame(three)));
  std::vector<std::uint8_t> partial{0, 0, 0, 5, '{'};
  EXPECT_TRUE(std::holds_alternative<NeedMoreData>(decode_frame(partial)));
}

TEST(Frame, PayloadWithoutTypeIsMalformed) {
  auto frame = encode_raw_frame("{}");
  try {
    decode_frame(frame);
    FAIL() << "expected MalformedFrame";
  } catch (const MalformedFrame& e) {
    EXPECT_EQ(e.consumed(), 6u);
  }
}

TEST(Frame, RejectsNonJsonAndInvalidUtf8) {
  EXPECT_THROW(decode_frame(encode_raw_frame("not json")), MalformedFrame);
  EXPECT_THROW(decode_frame(encode_raw_frame("[1,2]")), MalformedFrame);
  EXPECT_THROW(decode_frame(encode_raw_frame("{\"type\":\"hello\",\"seq\":0,\"body\":{\"robot_id\":\"\xff\",\"child_id\":\"c\"}}")),
               MalformedFrame);
}

TEST(Frame, UnknownTypeIsRejected) {
  EXPECT_THROW(decode_frame(encode_raw_frame(R"({"body":{},"seq":0,"type":"teleport"})")), MalformedFrame);
}

TEST(Frame, OversizedFrameIsRejectedBeforeItArrives) {
  std::vector<std::uint8_t> header{0x01, 0x00, 0x00, 0x01};  // 16 MiB + 1
  EXPECT_THROW(decode_frame(header), FrameTooLarge);
  std::vector<std::uint8_t> small{0x00, 0x00, 0x00, 0x10};
  EXPECT_THROW(decode_frame(small, 8), FrameTooLarge);
}

TEST(Frame, ConcatenationDecodesFirstMessageOnly) {
  Message a{0, Hello{"robot", "child"}};
  Message b{1, AudioEnd{"u1", 3}};
  auto fa = encode_frame(a);
  auto fb = encode_frame(b);
  std::vector<std::uint8_t> both = fa;
  both.insert(both.end(), fb.begin(), fb.end());
  auto result = decode_frame(both);
  ASSERT_TRUE(std::holds_alternative<DecodedFrame>(result));
  EXPECT_EQ(std::get<DecodedFrame>(result).message, a);
  EXPECT_EQ(std::get<DecodedFrame>(result).consumed, fa.size());
}

TEST(Frame, RandomMessagesRoundTrip) {
  std::mt19937_64 rng(20260101);
  for (std::uint64_t i = 0; i < 2000; ++i) {
    auto m = random_message(rng, i);
    auto frame = encode_frame(m);
    auto result = decode_frame(frame);
    ASSERT_TRUE(std::holds_alternative<DecodedFrame>(result)) << serialize(m);
    EXPECT_EQ(std::get<DecodedFrame>(result).message, m) << serialize(m);
    EXPECT_EQ(std::get<DecodedFrame>(result).consumed, frame.size());
  }
}

TEST(Frame, ByteByByteNeedsMoreDataUntilTheLastByte) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = random_message(rng, static_cast<std::uint64_t>(trial));
    auto frame = encode_frame(m);
    for (std::size_t n = 0; n < frame.size(); ++n) {
      ASSERT_TRUE(std::holds_alternative<NeedMoreData>(decode_frame(std::span(frame.data(), n))));
    }
    EXPECT_EQ(std::get<DecodedFrame>(decode_frame(frame)).message, m);
  }
}

TEST(EmotionResultBody, ExactlyOneOfScoresAndError) {
  auto both = R"({"body":{"error":"message error","scores":{"anger":0,"disgust":0,"fear":0,"happiness":1,"sadness":0,"surprise":0},"service":"mock"},"seq":0,"type":"emotion_result"})";
  auto neither = R"({"body":{"service":"mock"},"seq":0,"type":"emotion_result"})";
  auto wrong_text = R"({"body":{"error":"no face","service":"mock"},"seq":0,"type":"emotion_result"})";
  EXPECT_THROW(decode_frame(encode_raw_frame(both)), MalformedFrame);
  EXPECT_THROW(decode_frame(encode_raw_frame(neither)), MalformedFrame);
  EXPECT_THROW(decode_frame(encode_raw_frame(wrong_text)), MalformedFrame);

  Message bad{0, EmotionResult{ServiceKind::kMock, std::nullopt, std::nullopt}};
  EXPECT_THROW(encode_frame(bad), SerializationError);
}

TEST(Message, ScoresOutsideUnitIntervalAreRejected) {
  EmotionVector v{};
  v[0] = 1.5;
  EXPECT_THROW(encode_frame(Message{0, EmotionResult{ServiceKind::kMock, v, std::nullopt}}), SerializationError);
}

TEST(Message, AnimationNeedsAnId) {
  EXPECT_THROW(encode_frame(Message{0, Behavior{BehaviorCommand::animation(""), std::nullopt}}), SerializationError);
}

TEST(Message, BinaryFieldsTravelAsBase64) {
  Message m{3, AudioFragment{"u", 0, {1, -2}}};
  // 1 -> 01 00, -2 -> FE FF; base64 of 01 00 FE FF is AQD+/w==
  EXPECT_EQ(serialize(m), R"({"body":{"index":0,"pcm_s16le":"AQD+/w==","utterance_id":"u"},"seq":3,"type":"audio_fragment"})");
}

TEST(FrameDecoder, SkipsMalformedFrameAndContinues) {
  FrameDecoder decoder;
  auto bad = encode_raw_frame("{}");
  Message good{0, AudioEnd{"u", 1}};
  auto ok = encode_frame(good);
  decoder.append(bad);
  decoder.append(ok);
  EXPECT_THROW(decoder.next(), MalformedFrame);
  EXPECT_EQ(decoder.next(), good);
  EXPECT_EQ(decoder.next(), std::nullopt);
  EXPECT_EQ(decoder.buffered(), 0u);
}

TEST(FrameDecoder, ReassemblesArbitrarySplits) {
  std::mt19937_64 rng(99);
  std::vector<Message> sent;
  std::string stream;
  for (std::uint64_t i = 0; i < 30; ++i) {
    sent.push_back(random_message(rng, i));
    auto f = encode_frame(sent.back());
    stream.append(f.begin(), f.end());
  }
  FrameDecoder decoder;
  std::vector<Message> got;
  std::size_t pos = 0;
  while (pos < stream.size()) {
    auto n = std::min<std::size_t>(1 + rng() % 40, stream.size() - pos);
    decoder.append(std::string_view(stream).substr(pos, n));
    pos += n;
    while (auto m = decoder.next()) got.push_back(*m);
  }
  EXPECT_EQ(got, sent);
}

}  // namespace
}  // namespace sar::wire
