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

#include "sar/gateway/session_state.hpp"

#include "sar/user/user_model.hpp"

namespace sar::gateway {

using nlohmann::json;

void apply(SessionState& s, const SessionEvent& e) {
  ++s.events;
  if (s.session_id.empty()) s.session_id = e.session_id;
  const json& p = e.payload;
  switch (e.kind) {
    case EventKind::kConnect:
      s.started = e.ts;
      s.robot_id = p.value("robot_id", "");
      s.child_id = p.value("child_id", "");
      s.retry_limit = p.value("retry_limit", 3u);
      if (p.contains("script_id") && p["script_id"].is_string()) s.active_script_id = p["script_id"].get<std::string>();
      break;
    case EventKind::kEmotionResult:
      if (p.contains("scores")) {
        EmotionVector v{};
        for (Emotion em : kEmotions) v[index_of(em)] = p["scores"].at(std::string(emotion_name(em))).get<double>();
        s.last_scores = v;
        s.last_emotion = behavior::predominant_emotion(v);
        s.retry_counter = 0;
      } else {
        behavior::RetryTracker tracker(s.retry_limit);
        for (unsigned i = 0; i < s.retry_counter; ++i) tracker.on_failure();
        if (tracker.on_failure()) ++s.retry_limit_hits;
        s.retry_counter = tracker.count();
      }
      break;
    case EventKind::kTranscript:
      s.last_transcript = p.value("text", "");
      break;
    case EventKind::kSentiment: {
      s.last_sentiment = p.at("value").get<double>();
      auto band = behavior::sentiment_band(*s.last_sentiment);
      ++s.band_turns[static_cast<std::size_t>(band)];
      break;
    }
    case EventKind::kBehaviorSent:
      s.behaviors.push_back(user::command_from_json(p.at("command")));
      break;
    case EventKind::kOperatorAction:
      if (p.value("action", "") == "activate_script") {
        s.active_script_id = p.at("script_id").get<std::string>();
        s.operator_override = true;
      }
      break;
    case EventKind::kError:
      ++s.errors;
      break;
    case EventKind::kWarning:
      ++s.warnings;
      break;
    case EventKind::kDisconnect:
      s.ended = e.ts;
      break;
    case EventKind::kImageReceived:
    case EventKind::kSpeechStart:
    case EventKind::kFragmentReceived:
    case EventKind::kUtteranceComplete:
    case EventKind::kRetryLimitReached:
      break;
  }
}

SessionState replay(std::span<const SessionEvent> events) {
  SessionState s;
  for (const auto& e : events) apply(s, e);
  return s;
}

json to_json(const SessionState& s) {
  json behaviors = json::array();
  for (const auto& b : s.behaviors) behaviors.push_back(user::to_json(b));
  auto opt_ts = [](const std::optional<TimePoint>& t) { return t ? json(to_micros(*t)) : json(nullptr); };
  json scores = nullptr;
  if (s.last_scores) {
    scores = json::object();
    for (Emotion e : kEmotions) scores[std::string(emotion_name(e))] = (*s.last_scores)[index_of(e)];
  }
  return {{"session_id", s.session_id},
          {"robot_id", s.robot_id},
          {"child_id", s.child_id},
          {"started", opt_ts(s.started)},
          {"ended", opt_ts(s.ended)},
          {"live", s.live()},
          {"active_script_id", s.active_script_id ? json(*s.active_script_id) : json(nullptr)},
          {"operator_override", s.operator_override},
          {"retry_counter", s.retry_counter},
          {"retry_limit", s.retry_limit},
          {"last_emotion", s.last_emotion ? json(std::string(emotion_name(*s.last_emotion))) : json(nullptr)},
          {"last_scores", scores},
          {"last_sentiment", s.last_sentiment ? json(*s.last_sentiment) : json(nullptr)},
          {"last_transcript", s.last_transcript},
          {"behaviors", behaviors},
          {"events", s.events},
          {"errors", s.errors},
          {"warnings", s.warnings}};
}

}  // namespace sar::gateway
