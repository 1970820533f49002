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

#include "sar/gateway/event_log.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace sar::gateway {
namespace {

constexpr std::array<std::string_view, 14> kKindNames = {
    "connect",   "image_received", "emotion_result",  "speech_start",        "fragment_received",
    "utterance_complete", "transcript", "sentiment",  "behavior_sent",       "error",
    "operator_action",    "retry_limit_reached",      "warning",             "disconnect"};

}  // namespace

std::string_view event_kind_name(EventKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<EventKind>(i);
  }
  return std::nullopt;
}

nlohmann::json to_json(const SessionEvent& event) {
  return {{"ts", to_micros(event.ts)},
          {"index", event.index},
          {"session_id", event.session_id},
          {"kind", std::string(event_kind_name(event.kind))},
          {"payload", event.payload}};
}

SessionEvent event_from_json(const nlohmann::json& j) {
  try {
    SessionEvent e;
    e.ts = from_micros(j.at("ts").get<std::int64_t>());
    e.index = j.at("index").get<std::uint64_t>();
    e.session_id = j.at("session_id").get<std::string>();
    auto kind = parse_event_kind(j.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown event kind");
    e.kind = *kind;
    e.payload = j.at("payload");
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed event: ") + ex.what());
  }
}

std::vector<SessionEvent> parse_event_log(std::string_view ndjson) {
  std::vector<SessionEvent> out;
  std::size_t start = 0;
  while (start < ndjson.size()) {
    auto end = ndjson.find('\n', start);
    if (end == std::string_view::npos) end = ndjson.size();
    auto line = ndjson.substr(start, end - start);
    if (!line.empty()) {
      try {
        out.push_back(event_from_json(nlohmann::json::parse(line)));
      } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed event line: ") + e.what());
      }
    }
    start = end + 1;
  }
  return out;
}

std::vector<SessionEvent> read_event_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open event log " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_event_log(ss.str());
}

EventLog::EventLog(std::string session_id, std::optional<std::filesystem::path> file)
    : session_id_(std::move(session_id)) {
  if (file) {
    file_.open(*file, std::ios::app);
    if (!file_) throw std::runtime_error("cannot open event log " + file->string());
  }
}

EventLog::EventLog(std::string session_id, std::vector<SessionEvent> recorded)
    : session_id_(std::move(session_id)), events_(std::move(recorded)), sealed_(true) {}

SessionEvent EventLog::append(TimePoint ts, EventKind kind, nlohmann::json payload) {
  SessionEvent event;
  {
    std::lock_guard guard(mutex_);
    if (sealed_) throw std::logic_error("event appended to a sealed log");
    if (!events_.empty() && ts < events_.back().ts) ts = events_.back().ts;
    event = SessionEvent{ts, events_.size(), session_id_, kind, std::move(payload)};
    events_.push_back(event);
    if (file_.is_open()) {
      file_ << to_json(event).dump() << '\n';
      file_.flush();
    }
  }
  cv_.notify_all();
  return event;
}

std::vector<SessionEvent> EventLog::since(std::uint64_t first_index) const {
  std::lock_guard guard(mutex_);
  if (first_index >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(first_index), events_.end()};
}

std::size_t EventLog::size() const {
  std::lock_guard guard(mutex_);
  return events_.size();
}

std::vector<SessionEvent> EventLog::wait_since(std::uint64_t first_index, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [&] { return sealed_ || events_.size() > first_index; });
  if (first_index >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(first_index), events_.end()};
}

void EventLog::seal() {
  {
    std::lock_guard guard(mutex_);
    sealed_ = true;
    if (file_.is_open()) file_.close();
  }
  cv_.notify_all();
}

bool EventLog::sealed() const {
  std::lock_guard guard(mutex_);
  return sealed_;
}

}  // namespace sar::gateway
