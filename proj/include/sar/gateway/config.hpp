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
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sar/audio/vad.hpp"
#include "sar/behavior/arbitration.hpp"
#include "sar/cognition/backends.hpp"
#include "sar/common/clock.hpp"
#include "sar/user/user_model.hpp"

namespace sar::gateway {

enum class BackendKind { kMock, kRemote };

/// Pipelined transcribes each fragment as it arrives; sequential waits for
/// the end of the utterance and transcribes fragment after fragment. The
/// latter exists as a reference for latency comparisons.
enum class PipelineMode { kPipelined, kSequential };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GatewayConfig {
  int robot_port = 7070;
  int http_port = 8080;
  std::filesystem::path data_dir = "sar-data";

  behavior::BehaviorConfig behavior = behavior::BehaviorConfig::defaults();
  double alpha = user::kDefaultAlpha;

  audio::VadConfig vad;
  std::size_t fragment_size = 16000;

  BackendKind backend = BackendKind::kMock;
  std::filesystem::path manifest;
  std::filesystem::path positive_lexicon;
  std::filesystem::path negative_lexicon;
  Duration mock_latency{0};
  RemoteEndpoint remote;

  PipelineMode pipeline = PipelineMode::kPipelined;
  std::size_t workers = 4;

  std::vector<user::BehaviorScript> scripts;

  /// Relative paths inside the document resolve against `base_dir`.
  static GatewayConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static GatewayConfig load(const std::filesystem::path& file);
};

struct Backends {
  std::shared_ptr<EmotionRecognizer> emotion;
  std::shared_ptr<SpeechToText> speech;
  std::shared_ptr<SentimentAnalyzer> sentiment;
};

/// Local backends read the manifest and lexicon files; remote ones only need
/// the endpoint. A non-zero mock latency wraps speech-to-text in a delay.
Backends make_backends(const GatewayConfig& config, Clock& clock);

}  // namespace sar::gateway
