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

#include "sar/sim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sar::sim {

using nlohmann::json;

bool Expectation::matches(const BehaviorCommand& command) const {
  if (command.kind != kind) return false;
  if (animation_id && command.animation_id != *animation_id) return false;
  if (text && command.text != *text) return false;
  return true;
}

Scenario Scenario::from_json(const json& j, const std::filesystem::path& base_dir) {
  Scenario s;
  try {
    s.robot_id = j.value("robot_id", s.robot_id);
    s.child_id = j.at("child_id").get<std::string>();
    if (s.child_id.empty()) throw ScenarioError("child_id must not be empty");
    double previous = 0.0;
    for (const auto& step : j.value("steps", json::array())) {
      ScenarioStep st;
      st.at = step.at("at").get<double>();
      if (!std::isfinite(st.at) || st.at < 0.0) throw ScenarioError("step offsets must be non-negative");
      if (st.at < previous) throw ScenarioError("step offsets must be non-decreasing");
      previous = st.at;
      auto action = step.at("action").get<std::string>();
      if (action == "send_image") {
        st.action = StepAction::kSendImage;
      } else if (action == "speak") {
        st.action = StepAction::kSpeak;
      } else if (action == "pause") {
        st.action = StepAction::kPause;
      } else {
        throw ScenarioError("unknown step action '" + action + "'");
      }
      if (st.action != StepAction::kPause) {
        std::filesystem::path file(step.at("file").get<std::string>());
        st.file = file.is_absolute() ? file : base_dir / file;
        if (!std::filesystem::is_regular_file(st.file)) {
          throw ScenarioError("scenario file not found: " + st.file.string());
        }
      }
      s.steps.push_back(std::move(st));
    }
    if (j.contains("expected")) {
      std::vector<Expectation> expected;
      for (const auto& e : j["expected"]) {
        Expectation x;
        auto kind = parse_behavior_kind(e.at("kind").get<std::string>());
        if (!kind) throw ScenarioError("unknown expected kind '" + e.at("kind").get<std::string>() + "'");
        x.kind = *kind;
        if (e.contains("animation_id")) x.animation_id = e["animation_id"].get<std::string>();
        if (e.contains("text")) x.text = e["text"].get<std::string>();
        expected.push_back(std::move(x));
      }
      s.expected = std::move(expected);
    }
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("invalid scenario: ") + e.what());
  }
  return s;
}

Scenario Scenario::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError("cannot open scenario " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return from_json(json::parse(ss.str()), file.parent_path());
  } catch (const json::parse_error& e) {
    throw ScenarioError("scenario " + file.string() + " is not valid JSON: " + e.what());
  }
}

std::string describe(const Expectation& e) {
  std::string out(behavior_kind_name(e.kind));
  if (e.animation_id) out += " " + *e.animation_id;
  if (e.text) out += " \"" + *e.text + "\"";
  return out;
}

std::string describe(const BehaviorCommand& c) {
  std::string out(behavior_kind_name(c.kind));
  if (c.kind == BehaviorKind::kAnimation) {
    out += " " + c.animation_id;
  } else {
    out += " \"" + c.text + "\"";
  }
  return out;
}

std::vector<std::string> diff_transcript(const std::vector<Expectation>& expected,
                                         const std::vector<BehaviorCommand>& transcript) {
  std::vector<std::string> lines;
  std::size_t n = std::max(expected.size(), transcript.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::string want = i < expected.size() ? describe(expected[i]) : "(nothing)";
    std::string got = i < transcript.size() ? describe(transcript[i]) : "(nothing)";
    bool ok = i < expected.size() && i < transcript.size() && expected[i].matches(transcript[i]);
    if (!ok) lines.push_back("#" + std::to_string(i) + ": expected " + want + ", got " + got);
  }
  return lines;
}

}  // namespace sar::sim
