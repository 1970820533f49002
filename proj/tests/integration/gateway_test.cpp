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

#include <algorithm>
#include <cmath>

#include "gateway_harness.hpp"
#include "sar/audio/pcm.hpp"
#include "sar/cognition/image.hpp"
#include "sar/wire/frame.hpp"

namespace sar::gateway {
namespace {

using nlohmann::json;
using sar::testing::GatewayHarness;
using sar::testing::TempDir;

wire::ImageRequest image(const std::string& name) {
  auto img = read_ppm(sar::testing::data_path("fixtures/" + name));
  return wire::ImageRequest{img.width, img.height, img.rgb};
}

std::vector<std::string> kinds(const Session& s) {
  std::vector<std::string> out;
  for (const auto& e : s.log().all()) out.emplace_back(event_kind_name(e.kind));
  return out;
}

void write_raw(net::ByteStream& stream, const std::vector<std::uint8_t>& bytes) {
  stream.write(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void write_frame(net::ByteStream& stream, std::uint64_t seq, wire::Body body) {
  write_raw(stream, wire::encode_frame(wire::Message{seq, std::move(body)}));
}

std::vector<wire::Error> errors_of(const std::vector<sim::Received>& received) {
  std::vector<wire::Error> out;
  for (const auto& r : received) {
    if (const auto* e = std::get_if<wire::Error>(&r.message.body)) out.push_back(*e);
  }
  return out;
}

std::vector<std::int16_t> tone(std::size_t samples, double amplitude = 0.5) {
  std::vector<double> x(samples);
  for (std::size_t i = 0; i < samples; ++i) x[i] = amplitude * std::sin(2 * M_PI * 220.0 * i / 16000.0);
  return audio::quantize(x);
}

class GatewayTest : public ::testing::Test {
 protected:
  TempDir dir;
  GatewayConfig config = sar::testing::bundled_config(dir.path() / "data");
};

TEST_F(GatewayTest, ImageTurnAnswersWithAnimation) {
  GatewayHarness h(config);
  auto link = h.connect();
  link.client.send(wire::Hello{"r1", "child-a"});
  auto seq = link.client.send(image("happiness.ppm"));
  auto reply = link.client.await_reply(seq, h.deadline());
  ASSERT_TRUE(reply);
  const auto& behavior = std::get<wire::Behavior>(reply->message.body);
  EXPECT_EQ(behavior.command, BehaviorCommand::animation("dance_joy"));
  EXPECT_EQ(behavior.reply_to, seq);

  auto received = link.client.received();
  ASSERT_EQ(received.size(), 2u);
  const auto& result = std::get<wire::EmotionResult>(received[0].message.body);
  ASSERT_TRUE(result.scores);
  EXPECT_DOUBLE_EQ((*result.scores)[index_of(Emotion::kHappiness)], kFixtureHitConfidence);
  EXPECT_EQ(received[0].message.seq, 0u);
  EXPECT_EQ(received[1].message.seq, 1u);

  ASSERT_TRUE(link.client.finish(h.deadline()));
  auto model = h.gateway().child_model("child-a");
  EXPECT_EQ(model.observation_count, 1u);
  EXPECT_EQ(model.sessions, std::vector<std::string>{"s000001"});
}

TEST_F(GatewayTest, HappyScenarioProducesExpectedTranscriptAndLog) {
  GatewayHarness h(config);
  auto link = h.connect();
  auto scenario = sim::Scenario::load(sar::testing::data_path("scenarios/happy_session.json"));
  auto result = sim::run_scenario(scenario, link.client, h.clock());
  ASSERT_EQ(result.status, sim::RunStatus::kOk) << result.detail;
  EXPECT_TRUE(result.diff.empty());

  auto session = h.gateway().session("s000001");
  std::vector<std::string> expected = {
      "connect",           "image_received",     "emotion_result", "behavior_sent", "speech_start",
      "fragment_received", "fragment_received",  "utterance_complete", "transcript", "sentiment",
      "behavior_sent",     "disconnect"};
  EXPECT_EQ(kinds(*session), expected);

  auto state = session->state();
  EXPECT_EQ(state.last_transcript, "i am happy");
  EXPECT_EQ(state.last_emotion, Emotion::kHappiness);
  EXPECT_FALSE(state.live());
  EXPECT_FALSE(session->connected());
  ASSERT_TRUE(state.last_sentiment);
  EXPECT_GT(*state.last_sentiment, 0.6);
}

TEST_F(GatewayTest, LiveStateEqualsReplayAndFile) {
  GatewayHarness h(config);
  auto link = h.connect();
  auto scenario = sim::Scenario::load(sar::testing::data_path("scenarios/happy_session.json"));
  ASSERT_EQ(sim::run_scenario(scenario, link.client, h.clock()).status, sim::RunStatus::kOk);
  auto session = h.gateway().session("s000001");
  auto events = session->log().all();
  EXPECT_EQ(session->state(), replay(events));
  EXPECT_EQ(read_event_log(config.data_dir / "sessions" / "s000001.ndjson"), events);
  for (std::size_t i = 0; i < events.size(); ++i) EXPECT_EQ(events[i].index, i);
}

TEST_F(GatewayTest, RestartRestoresSessionsAndContinuesNumbering) {
  SessionState before;
  {
    GatewayHarness h(config);
    auto link = h.connect();
    link.client.send(wire::Hello{"r1", "child-a"});
    ASSERT_TRUE(link.client.await_reply(link.client.send(image("sadness.ppm")), h.deadline()));
    ASSERT_TRUE(link.client.finish(h.deadline()));
    before = h.gateway().session("s000001")->state();
  }
  GatewayHarness h(config);
  EXPECT_EQ(h.gateway().session("s000001")->state(), before);
  auto link = h.connect();
  link.client.send(wire::Hello{"r1", "child-b"});
  ASSERT_TRUE(link.client.finish(h.deadline()));
  EXPECT_NO_THROW(h.gateway().session("s000002"));
  EXPECT_THROW(h.gateway().session("s999999"), UnknownId);
}

TEST_F(GatewayTest, NoFaceSendsRetryPromptAndCountsTowardLimit) {
  GatewayHarness h(config);
  auto link = h.connect();
  link.client.send(wire::Hello{"r1", "child-b"});
  for (int i = 0; i < 3; ++i) {
    auto seq = link.client.send(image("no_face.ppm"));
    auto reply = link.client.await_reply(seq, h.deadline());
    ASSERT_TRUE(reply);
    const auto& b = std::get<wire::Behavior>(reply->message.body);
    EXPECT_EQ(b.command.kind, BehaviorKind::kRetryPrompt);
    EXPECT_EQ(b.command.text, config.behavior.retry_phrase);
  }
  auto session = h.gateway().session("s000001");
  auto state = session->state();
  EXPECT_EQ(state.retry_limit_hits, 1u);
  EXPECT_EQ(state.retry_counter, 0u);
  auto k = kinds(*session);
  EXPECT_EQ(std::count(k.begin(), k.end(), "retry_limit_reached"), 1);

  link.client.send(image("no_face.ppm"));
  auto seq = link.client.send(image("sadness.ppm"));
  auto reply = link.client.await_reply(seq, h.deadline());
  ASSERT_TRUE(reply);
  EXPECT_EQ(std::get<wire::Behavior>(reply->message.body).command, BehaviorCommand::animation("comfort_hug"));
  EXPECT_EQ(session->state().retry_counter, 0u);

  for (const auto& r : link.client.received()) {
    if (const auto* e = std::get_if<wire::EmotionResult>(&r.message.body); e && e->error) {
      EXPECT_EQ(*e->error, "message error");
      EXPECT_FALSE(e->scores);
    }
  }
  auto model = h.gateway().child_model("child-b");
  EXPECT_EQ(model.observation_count, 1u);
}

TEST_F(GatewayTest, MissingFragmentIsReportedAndAnswered) {
  GatewayHarness h(config);
  auto link = h.connect();
  link.client.send(wire::Hello{"r1", "child-a"});
  link.client.send(wire::AudioStart{"u1", 16000});
  link.client.send(wire::AudioFragment{"u1", 0, tone(1600)});
  link.client.send(wire::AudioFragment{"u1", 2, tone(1600)});
  auto seq = link.client.send(wire::AudioEnd{"u1", 3});
  auto reply = link.client.await_reply(seq, h.deadline());
  ASSERT_TRUE(reply);
  EXPECT_EQ(std::get<wire::Behavior>(reply->message.body).command.kind, BehaviorKind::kRetryPrompt);

  auto events = h.gateway().session("s000001")->log().all();
  auto it = std::find_if(events.begin(), events.end(), [](const auto& e) { return e.kind == EventKind::kError; });
  ASSERT_NE(it, events.end());
  EXPECT_EQ(it->payload["source"], "reassembly");
  EXPECT_EQ(it->payload["reason"], "IncompleteUtterance");
  EXPECT_EQ(it->payload["reply_to"], seq);
}

TEST_F(GatewayTest, EmptyUtteranceGetsWarningAndRetry) {
  GatewayHarness h(config);
  auto link = h.connect();
  link.client.send(wire::Hello{"r1", "child-a"});
  link.client.send(wire::AudioStart{"u1", 16000});
  auto seq = link.client.send(wire::AudioEnd{"u1", 0});
  auto reply = link.client.await_reply(seq, h.deadline());
  ASSERT_TRUE(reply);
  EXPECT_EQ(std::get<wire::Behavior>(reply->message.body).command.kind, BehaviorKind::kRetryPrompt);
  EXPECT_EQ(h.gateway().session("s000001")->state().warnings, 1u);
}

TEST_F(GatewayTest, UnrecognizedSpeechGetsNeutralAnswer) {
  GatewayHarness h(config);
  auto link = h.connect();
  link.client.send(wire::Hello{"r1", "child-a"});
  link.client.send(wire::AudioStart{"u1", 16000});
  link.client.send(wire::AudioFragment{"u1", 0, tone(3200)});
  auto seq = link.client.send(wire::AudioEnd{"u1", 1});
  auto reply = link.client.await_reply(seq, h.deadline());
  ASSERT_TRUE(reply);
  EXPECT_EQ(std::get<wire::Behavior>(reply->message.body).command,
            BehaviorCommand::speech(config.behavior.phrases.phrases(behavior::SentimentBand::kNeutral)[0]));
  auto received = link.client.received();
  const auto& result = std::get<wire::UtteranceResult>(received.at(0).message.body);
  EXPECT_EQ(result.transcript, "");
  EXPECT_DOUBLE_EQ(result.sentiment, 0.5);
}

TEST_F(GatewayTest, ProtocolErrorsAreAnsweredWithoutDroppingTheConnection) {
  GatewayHarness h(config);
  auto link = h.connect();
  auto& stream = *link.stream;
  write_frame(stream, 0, image("happiness.ppm"));          // before hello
  write_raw(stream, {0, 0, 0, 3, 'x', 'y', 'z'});          // malformed
  write_frame(stream, 1, wire::Hello{"r1", "child-a"});
  write_frame(stream, 5, image("happiness.ppm"));          // out of order
  write_frame(stream, 6, wire::Behavior{BehaviorCommand::speech("hi"), std::nullopt});
  write_frame(stream, 7, wire::Hello{"r1", "child-a"});    // second hello
  write_frame(stream, 8, image("happiness.ppm"));          // valid again
  ASSERT_TRUE(link.client.finish(h.deadline()));

  auto errors = errors_of(link.client.received());
  ASSERT_EQ(errors.size(), 5u);
  EXPECT_EQ(errors[0].reply_to, 0u);
  EXPECT_EQ(errors[1].reply_to, std::nullopt);
  EXPECT_EQ(errors[2].reply_to, 5u);
  EXPECT_NE(errors[2].message.find("out-of-order"), std::string::npos);
  EXPECT_EQ(errors[3].reply_to, 6u);
  EXPECT_EQ(errors[4].reply_to, 7u);
  ASSERT_FALSE(link.client.transcript().empty());
  EXPECT_EQ(link.client.transcript().back(), BehaviorCommand::animation("dance_joy"));

  auto state = h.gateway().session("s000001")->state();
  EXPECT_EQ(state.errors, 3u);
}

TEST_F(GatewayTest, OversizedFrameClosesTheConnection) {
  GatewayHarness h(config);
  auto link = h.connect();
  link.client.send(wire::Hello{"r1", "child-a"});
  write_raw(*link.stream, {0x7F, 0xFF, 0xFF, 0xFF});
  ASSERT_TRUE(link.client.finish(h.deadline()));
  auto errors = errors_of(link.client.received());
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_FALSE(errors[0].reply_to);
  auto events = h.gateway().session("s000001")->log().all();
  EXPECT_EQ(events.back().kind, EventKind::kDisconnect);
  EXPECT_EQ(events.back().payload["reason"], "frame too large");
}

TEST_F(GatewayTest, ScriptPlaysAtSessionStartWithPreferences) {
  GatewayHarness h(config);
  {
    auto link = h.connect();
    link.client.send(wire::Hello{"r1", "child-a"});
    ASSERT_TRUE(link.client.await_reply(link.client.send(image("happiness.ppm")), h.deadline()));
    ASSERT_TRUE(link.client.finish(h.deadline()));
  }
  h.gateway().put_preferences("child-a", {{"favorite_color", "blue"}});
  auto link = h.connect();
  link.client.send(wire::Hello{"r1", "child-a"});
  ASSERT_TRUE(link.client.finish(h.deadline()));

  std::vector<BehaviorCommand> expected = {BehaviorCommand::animation("wave_hello"),
                                           BehaviorCommand::speech("Hello! Shall we talk about blue things today?")};
  EXPECT_EQ(link.client.transcript(), expected);
  for (const auto& r : link.client.received()) {
    EXPECT_FALSE(std::get<wire::Behavior>(r.message.body).reply_to);
  }
  auto state = h.gateway().session("s000002")->state();
  EXPECT_EQ(state.active_script_id, "greeting");
  EXPECT_FALSE(state.operator_override);
  auto scripts = h.gateway().scripts();
  auto greeting = std::find_if(scripts.begin(), scripts.end(), [](const auto& s) { return s.script_id == "greeting"; });
  ASSERT_NE(greeting, scripts.end());
  EXPECT_TRUE(greeting->last_used);
}

TEST_F(GatewayTest, SequentialModeGivesTheSameAnswers) {
  config.pipeline = PipelineMode::kSequential;
  GatewayHarness h(config);
  auto link = h.connect();
  auto scenario = sim::Scenario::load(sar::testing::data_path("scenarios/happy_session.json"));
  auto result = sim::run_scenario(scenario, link.client, h.clock());
  ASSERT_EQ(result.status, sim::RunStatus::kOk) << result.detail;
  EXPECT_TRUE(result.diff.empty());
}

class UnreachableRecognizer final : public EmotionRecognizer {
 public:
  RecognitionResult classify(const Image&) override { throw BackendUnavailable("connection refused"); }
};

class UnreachableSpeech final : public SpeechToText {
 public:
  std::string transcribe(std::span<const double>, unsigned) override { throw BackendUnavailable("timed out"); }
};

TEST_F(GatewayTest, BackendFailuresStillAnswerTheRobot) {
  GatewayHarness h(config, [](const GatewayConfig& c, Clock& clock) {
    auto backends = make_backends(c, clock);
    backends.emotion = std::make_shared<UnreachableRecognizer>();
    backends.speech = std::make_shared<UnreachableSpeech>();
    return backends;
  });
  auto link = h.connect();
  link.client.send(wire::Hello{"r1", "child-a"});
  auto seq = link.client.send(image("happiness.ppm"));
  auto reply = link.client.await_reply(seq, h.deadline());
  ASSERT_TRUE(reply);
  EXPECT_EQ(std::get<wire::Behavior>(reply->message.body).command.kind, BehaviorKind::kRetryPrompt);

  link.client.send(wire::AudioStart{"u1", 16000});
  link.client.send(wire::AudioFragment{"u1", 0, tone(1600)});
  seq = link.client.send(wire::AudioEnd{"u1", 1});
  reply = link.client.await_reply(seq, h.deadline());
  ASSERT_TRUE(reply);
  EXPECT_EQ(std::get<wire::Behavior>(reply->message.body).command.kind, BehaviorKind::kRetryPrompt);

  auto events = h.gateway().session("s000001")->log().all();
  std::vector<std::string> sources;
  for (const auto& e : events) {
    if (e.kind == EventKind::kError) sources.push_back(e.payload["source"]);
  }
  EXPECT_EQ(sources, (std::vector<std::string>{"backend", "backend"}));
}

TEST_F(GatewayTest, InvalidImageIsAnsweredWithRetry) {
  GatewayHarness h(config);
  auto link = h.connect();
  link.client.send(wire::Hello{"r1", "child-a"});
  auto seq = link.client.send(wire::ImageRequest{4, 4, std::vector<std::uint8_t>(5, 0)});
  auto reply = link.client.await_reply(seq, h.deadline());
  ASSERT_TRUE(reply);
  EXPECT_EQ(std::get<wire::Behavior>(reply->message.body).command.kind, BehaviorKind::kRetryPrompt);
  auto events = h.gateway().session("s000001")->log().all();
  EXPECT_EQ(events.back().kind, EventKind::kBehaviorSent);
  EXPECT_EQ(events[events.size() - 2].payload["source"], "image");
}

}  // namespace
}  // namespace sar::gateway
