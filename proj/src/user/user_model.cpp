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

#include "sar/user/user_model.hpp"

#include <algorithm>
#include <cmath>

namespace sar::user {

using nlohmann::json;

UserModel observe_emotion(UserModel model, const EmotionScores& scores, TimePoint ts, double alpha) {
  if (!scores.valid()) throw std::invalid_argument("emotion scores outside [0,1]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0,1]");
  if (model.observation_count == 0 || !model.emotion_profile) {
    model.emotion_profile = scores.values;
  } else {
    auto& profile = *model.emotion_profile;
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
      profile[i] = (1.0 - alpha) * profile[i] + alpha * scores.values[i];
    }
  }
  ++model.observation_count;
  model.last_updated = ts;
  return model;
}

double raw_valence(const EmotionVector& profile) {
  double v = 0.0;
  for (std::size_t i = 0; i < kEmotionCount; ++i) v += kValenceWeights[i] * profile[i];
  return v;
}

double mood_valence(const UserModel& model) {
  if (model.observation_count == 0 || !model.emotion_profile) throw NoObservations();
  return std::clamp(raw_valence(*model.emotion_profile), -1.0, 1.0);
}

std::string render_template(const std::string& text, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      auto close = text.find('}', i + 1);
      if (close != std::string::npos) {
        auto it = values.find(text.substr(i + 1, close - i - 1));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(text[i++]);
  }
  return out;
}

void BehaviorScript::validate() const {
  if (script_id.empty()) throw InvalidScript("script_id is empty");
  if (steps.empty()) throw InvalidScript("script '" + script_id + "' has no steps");
  if (!(mood_lo >= -1.0 && mood_hi <= 1.0)) throw InvalidScript("mood range must lie within [-1, 1]");
  if (!(mood_lo <= mood_hi)) throw InvalidScript("mood range has lo > hi");
  for (const auto& step : steps) {
    if (step.kind == BehaviorKind::kAnimation && step.animation_id.empty()) {
      throw InvalidScript("animation step without animation_id");
    }
    if (step.kind != BehaviorKind::kAnimation && step.text.empty()) {
      throw InvalidScript("speech step without text");
    }
  }
}

const BehaviorScript& choose_script_for_valence(std::span<const BehaviorScript> library, double valence) {
  if (library.empty()) throw EmptyLibrary();

  const BehaviorScript* best = nullptr;
  auto older = [](const BehaviorScript& a, const BehaviorScript& b) {
    if (a.last_used != b.last_used) {
      if (!a.last_used) return true;
      if (!b.last_used) return false;
      return *a.last_used < *b.last_used;
    }
    return a.script_id < b.script_id;
  };
  for (const auto& s : library) {
    if (s.contains(valence) && (best == nullptr || older(s, *best))) best = &s;
  }
  if (best != nullptr) return *best;

  for (const auto& s : library) {
    if (best == nullptr) {
      best = &s;
      continue;
    }
    double d = std::abs(s.midpoint() - valence);
    double best_d = std::abs(best->midpoint() - valence);
    if (d < best_d || (d == best_d && s.script_id < best->script_id)) best = &s;
  }
  return *best;
}

const BehaviorScript& choose_script(std::span<const BehaviorScript> library, const UserModel& model) {
  if (library.empty()) throw EmptyLibrary();
  return choose_script_for_valence(library, mood_valence(model));
}

json to_json(const BehaviorCommand& command) {
  json j = {{"kind", std::string(behavior_kind_name(command.kind))}};
  if (command.kind == BehaviorKind::kAnimation) {
    j["animation_id"] = command.animation_id;
  } else {
    j["text"] = command.text;
  }
  return j;
}

BehaviorCommand command_from_json(const json& j) {
  auto kind = parse_behavior_kind(j.at("kind").get<std::string>());
  if (!kind) throw InvalidScript("unknown behavior kind");
  BehaviorCommand c;
  c.kind = *kind;
  if (c.kind == BehaviorKind::kAnimation) {
    c.animation_id = j.at("animation_id").get<std::string>();
  } else {
    c.text = j.at("text").get<std::string>();
  }
  return c;
}

json to_json(const UserModel& model) {
  json profile = nullptr;
  if (model.emotion_profile) {
    profile = json::object();
    for (Emotion e : kEmotions) profile[std::string(emotion_name(e))] = (*model.emotion_profile)[index_of(e)];
  }
  return {{"child_id", model.child_id},
          {"preferences", model.preferences},
          {"emotion_profile", profile},
          {"observation_count", model.observation_count},
          {"last_updated", model.last_updated ? json(to_micros(*model.last_updated)) : json(nullptr)},
          {"sessions", model.sessions}};
}

UserModel user_model_from_json(const json& j) {
  UserModel m;
  try {
    m.child_id = j.at("child_id").get<std::string>();
    m.preferences = j.at("preferences").get<std::map<std::string, std::string>>();
    m.observation_count = j.at("observation_count").get<std::uint64_t>();
    const json& profile = j.at("emotion_profile");
    if (!profile.is_null()) {
      EmotionVector v{};
      for (Emotion e : kEmotions) v[index_of(e)] = profile.at(std::string(emotion_name(e))).get<double>();
      m.emotion_profile = v;
    }
    const json& ts = j.at("last_updated");
    if (!ts.is_null()) m.last_updated = from_micros(ts.get<std::int64_t>());
    m.sessions = j.at("sessions").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed user model: ") + e.what());
  }
  if ((m.observation_count == 0) != !m.emotion_profile.has_value()) {
    throw std::invalid_argument("user model profile presence disagrees with observation_count");
  }
  if (m.emotion_profile) {
    for (double v : *m.emotion_profile) {
      if (!in_unit_interval(v)) throw std::invalid_argument("user model profile entry outside [0,1]");
    }
  }
  return m;
}

json to_json(const BehaviorScript& script) {
  json steps = json::array();
  for (const auto& s : script.steps) steps.push_back(to_json(s));
  return {{"script_id", script.script_id},
          {"title", script.title},
          {"steps", steps},
          {"mood_range", {script.mood_lo, script.mood_hi}},
          {"last_used", script.last_used ? json(to_micros(*script.last_used)) : json(nullptr)}};
}

BehaviorScript script_from_json(const json& j) {
  BehaviorScript s;
  try {
    s.script_id = j.at("script_id").get<std::string>();
    s.title = j.value("title", std::string{});
    for (const auto& step : j.at("steps")) s.steps.push_back(command_from_json(step));
    const json& range = j.at("mood_range");
    if (!range.is_array() || range.size() != 2) throw InvalidScript("mood_range must be [lo, hi]");
    s.mood_lo = range[0].get<double>();
    s.mood_hi = range[1].get<double>();
    if (j.contains("last_used") && !j["last_used"].is_null()) {
      s.last_used = from_micros(j["last_used"].get<std::int64_t>());
    }
  } catch (const json::exception& e) {
    throw InvalidScript(std::string("malformed script: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace sar::user
