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

#include <fstream>

#include "sar/gateway/config.hpp"
#include "test_support.hpp"

namespace sar::gateway {
namespace {

using nlohmann::json;

TEST(ConfigTest, DefaultsFromEmptyDocument) {
  auto c = GatewayConfig::from_json(json::object(), "/base");
  EXPECT_EQ(c.robot_port, 7070);
  EXPECT_EQ(c.http_port, 8080);
  EXPECT_EQ(c.backend, BackendKind::kMock);
  EXPECT_EQ(c.pipeline, PipelineMode::kPipelined);
  EXPECT_EQ(c.fragment_size, 16000u);
  EXPECT_DOUBLE_EQ(c.alpha, 0.3);
  EXPECT_TRUE(c.scripts.empty());
}

TEST(ConfigTest, BundledConfigurationLoads) {
  auto c = GatewayConfig::load(testing::data_path("config.json"));
  EXPECT_EQ(c.manifest, testing::data_path("fixtures/manifest.json"));
  EXPECT_TRUE(std::filesystem::exists(c.manifest));
  EXPECT_TRUE(std::filesystem::exists(c.positive_lexicon));
  EXPECT_TRUE(std::filesystem::exists(c.negative_lexicon));
  EXPECT_EQ(c.scripts.size(), 3u);
  EXPECT_EQ(c.behavior.animations.animation_for(Emotion::kHappiness), "dance_joy");
  EXPECT_EQ(c.behavior.retry_limit, 3u);
  EXPECT_EQ(c.vad.hangover_windows, 5u);
}

TEST(ConfigTest, RelativePathsResolveAgainstBase) {
  json j = {{"data_dir", "store"},
            {"backend", {{"manifest", "m.json"}, {"lexicon", {{"positive", "/abs/p.txt"}, {"negative", "n.txt"}}}}}};
  auto c = GatewayConfig::from_json(j, "/etc/sar");
  EXPECT_EQ(c.data_dir, std::filesystem::path("/etc/sar/store"));
  EXPECT_EQ(c.manifest, std::filesystem::path("/etc/sar/m.json"));
  EXPECT_EQ(c.positive_lexicon, std::filesystem::path("/abs/p.txt"));
}

TEST(ConfigTest, ParsesRemoteAndPipelineSections) {
  json j = {{"backend",
             {{"kind", "remote"},
              {"remote", {{"host", "10.0.0.2"}, {"port", 9000}, {"connect_timeout_ms", 250}, {"total_timeout_ms", 2000}}}}},
            {"pipeline", {{"mode", "sequential"}, {"workers", 2}}},
            {"user_model", {{"alpha", 0.5}}}};
  auto c = GatewayConfig::from_json(j, ".");
  EXPECT_EQ(c.backend, BackendKind::kRemote);
  EXPECT_EQ(c.remote.host, "10.0.0.2");
  EXPECT_EQ(c.remote.port, 9000);
  EXPECT_EQ(c.remote.connect_timeout, std::chrono::milliseconds(250));
  EXPECT_EQ(c.remote.total_timeout, std::chrono::milliseconds(2000));
  EXPECT_EQ(c.pipeline, PipelineMode::kSequential);
  EXPECT_EQ(c.workers, 2u);
  EXPECT_DOUBLE_EQ(c.alpha, 0.5);
}

TEST(ConfigTest, RejectsInvalidValues) {
  EXPECT_THROW(GatewayConfig::from_json({{"backend", {{"kind", "cloud"}}}}, "."), ConfigError);
  EXPECT_THROW(GatewayConfig::from_json({{"pipeline", {{"mode", "batch"}}}}, "."), ConfigError);
  EXPECT_THROW(GatewayConfig::from_json({{"user_model", {{"alpha", 2.0}}}}, "."), ConfigError);
  EXPECT_THROW(GatewayConfig::from_json({{"audio", {{"fragment_size", 0}}}}, "."), ConfigError);
  EXPECT_THROW(GatewayConfig::from_json({{"robot_port", "x"}}, "."), ConfigError);
  EXPECT_THROW(GatewayConfig::from_json({{"scripts", {{{"script_id", ""}}}}}, "."), ConfigError);
}

TEST(ConfigTest, LoadReportsMissingAndMalformedFiles) {
  testing::TempDir dir;
  EXPECT_THROW(GatewayConfig::load(dir / "absent.json"), ConfigError);
  std::ofstream(dir / "bad.json") << "{ nope";
  EXPECT_THROW(GatewayConfig::load(dir / "bad.json"), ConfigError);
}

TEST(ConfigTest, MockBackendsNeedFixtures) {
  VirtualClock clock;
  EXPECT_THROW(make_backends(GatewayConfig{}, clock), ConfigError);
  auto b = make_backends(GatewayConfig::load(testing::data_path("config.json")), clock);
  EXPECT_TRUE(b.emotion && b.speech && b.sentiment);
}

}  // namespace
}  // namespace sar::gateway
