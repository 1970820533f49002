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

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sar/behavior/command.hpp"

namespace sar::sim {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StepAction { kSendImage, kSpeak, kPause };

struct ScenarioStep {
  double at = 0.0;  // seconds from scenario start
  StepAction action = StepAction::kPause;
  std::filesystem::path file;  // PPM image or WAV recording; empty for pause
};

/// One expected behavior. Unset fields match anything.
struct Expectation {
  BehaviorKind kind = BehaviorKind::kSpeech;
  std::optional<std::string> animation_id;
  std::optional<std::string> text;

  bool matches(const BehaviorCommand& command) const;
};

struct Scenario {
  std::string robot_id = "sim-robot";
  std::string child_id;
  std::vector<ScenarioStep> steps;
  std::optional<std::vector<Expectation>> expected;

  /// Throws ScenarioError: schema errors, decreasing offsets, missing files.
  /// Relative file names resolve against `base_dir`.
  static Scenario from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static Scenario load(const std::filesystem::path& file);
};

std::string describe(const Expectation& e);
std::string describe(const BehaviorCommand& c);

/// Empty when `transcript` satisfies `expected`, otherwise one line per
/// differing position.
std::vector<std::string> diff_transcript(const std::vector<Expectation>& expected,
                                         const std::vector<BehaviorCommand>& transcript);

}  // namespace sar::sim
