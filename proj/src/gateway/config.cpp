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

#include "sar/gateway/config.hpp"

#include <fstream>
#include <sstream>

namespace sar::gateway {
namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::chrono::milliseconds ms_field(const json& j, const char* key, std::chrono::milliseconds fallback) {
  return j.contains(key) ? std::chrono::milliseconds(j.at(key).get<std::int64_t>()) : fallback;
}

}  // namespace

GatewayConfig GatewayConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  GatewayConfig c;
  try {
    c.robot_port = j.value("robot_port", c.robot_port);
    c.http_port = j.value("http_port", c.http_port);
    if (j.contains("data_dir")) c.data_dir = resolve(base_dir, j["data_dir"].get<std::string>());

    if (j.contains("behavior")) c.behavior = behavior::BehaviorConfig::from_json(j["behavior"]);
    if (j.contains("user_model")) c.alpha = j["user_model"].value("alpha", c.alpha);
    if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) throw ConfigError("user_model.alpha must lie in [0, 1]");

    if (j.contains("audio")) {
      const json& a = j["audio"];
      c.vad.start_threshold = a.value("start_threshold", c.vad.start_threshold);
      c.vad.stop_threshold = a.value("stop_threshold", c.vad.stop_threshold);
      c.vad.hangover_windows = a.value("hangover_windows", c.vad.hangover_windows);
      c.fragment_size = a.value("fragment_size", c.fragment_size);
    }
    c.vad.validate();
    if (c.fragment_size == 0) throw ConfigError("audio.fragment_size must be positive");

    if (j.contains("backend")) {
      const json& b = j["backend"];
      auto kind = b.value("kind", std::string("mock"));
      if (kind == "mock") {
        c.backend = BackendKind::kMock;
      } else if (kind == "remote") {
        c.backend = BackendKind::kRemote;
      } else {
        throw ConfigError("backend.kind must be 'mock' or 'remote'");
      }
      if (b.contains("manifest")) c.manifest = resolve(base_dir, b["manifest"].get<std::string>());
      if (b.contains("lexicon")) {
        c.positive_lexicon = resolve(base_dir, b["lexicon"].at("positive").get<std::string>());
        c.negative_lexicon = resolve(base_dir, b["lexicon"].at("negative").get<std::string>());
      }
      c.mock_latency = std::chrono::duration_cast<Duration>(ms_field(b, "mock_latency_ms", {}));
      if (b.contains("remote")) {
        const json& r = b["remote"];
        c.remote.host = r.value("host", c.remote.host);
        c.remote.port = r.value("port", c.remote.port);
        c.remote.emotion_path = r.value("emotion_path", c.remote.emotion_path);
        c.remote.transcript_path = r.value("transcript_path", c.remote.transcript_path);
        c.remote.sentiment_path = r.value("sentiment_path", c.remote.sentiment_path);
        c.remote.connect_timeout = ms_field(r, "connect_timeout_ms", c.remote.connect_timeout);
        c.remote.total_timeout = ms_field(r, "total_timeout_ms", c.remote.total_timeout);
      }
    }

    if (j.contains("pipeline")) {
      const json& p = j["pipeline"];
      auto mode = p.value("mode", std::string("pipelined"));
      if (mode == "pipelined") {
        c.pipeline = PipelineMode::kPipelined;
      } else if (mode == "sequential") {
        c.pipeline = PipelineMode::kSequential;
      } else {
        throw ConfigError("pipeline.mode must be 'pipelined' or 'sequential'");
      }
      c.workers = p.value("workers", c.workers);
    }

    if (j.contains("scripts")) {
      for (const auto& s : j["scripts"]) c.scripts.push_back(user::script_from_json(s));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid gateway configuration: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid gateway configuration: ") + e.what());
  }
  return c;
}

GatewayConfig GatewayConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open configuration " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ConfigError("configuration " + file.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j, file.parent_path());
}

Backends make_backends(const GatewayConfig& config, Clock& clock) {
  Backends b;
  if (config.backend == BackendKind::kRemote) {
    b.emotion = std::make_shared<RemoteEmotionRecognizer>(config.remote);
    b.speech = std::make_shared<RemoteSpeechToText>(config.remote);
    b.sentiment = std::make_shared<RemoteSentimentAnalyzer>(config.remote);
    return b;
  }
  if (config.manifest.empty()) throw ConfigError("mock backend needs backend.manifest");
  if (config.positive_lexicon.empty()) throw ConfigError("mock backend needs backend.lexicon");
  auto manifest = std::make_shared<const FixtureManifest>(FixtureManifest::load(config.manifest));
  auto lexicon = std::make_shared<const Lexicon>(Lexicon::load(config.positive_lexicon, config.negative_lexicon));
  b.emotion = std::make_shared<ManifestEmotionRecognizer>(manifest);
  std::shared_ptr<SpeechToText> speech = std::make_shared<ManifestSpeechToText>(manifest);
  if (config.mock_latency > Duration::zero()) {
    speech = std::make_shared<DelayedSpeechToText>(speech, clock, config.mock_latency);
  }
  b.speech = speech;
  b.sentiment = std::make_shared<LexiconSentimentAnalyzer>(lexicon);
  return b;
}

}  // namespace sar::gateway
