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

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sar/common/clock.hpp"

namespace sar::gateway {

enum class EventKind {
  kConnect,
  kImageReceived,
  kEmotionResult,
  kSpeechStart,
  kFragmentReceived,
  kUtteranceComplete,
  kTranscript,
  kSentiment,
  kBehaviorSent,
  kError,
  kOperatorAction,
  kRetryLimitReached,
  kWarning,
  kDisconnect,
};

std::string_view event_kind_name(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);

/// One line of a session log. `index` is the arrival order within the session
/// and breaks ties between equal timestamps.
struct SessionEvent {
  TimePoint ts;
  std::uint64_t index = 0;
  std::string session_id;
  EventKind kind = EventKind::kWarning;
  nlohmann::json payload = nlohmann::json::object();

  bool operator==(const SessionEvent&) const = default;
};

nlohmann::json to_json(const SessionEvent& event);
/// Throws std::invalid_argument.
SessionEvent event_from_json(const nlohmann::json& j);

/// Parses newline-delimited JSON, skipping blank lines.
std::vector<SessionEvent> parse_event_log(std::string_view ndjson);
std::vector<SessionEvent> read_event_log(const std::filesystem::path& path);

/// Append-only event log of one session: kept in memory for live subscribers
/// and mirrored line by line to a file when a path is given.
class EventLog {
 public:
  EventLog(std::string session_id, std::optional<std::filesystem::path> file);

  /// Read-only, sealed log of a finished session loaded from disk.
  EventLog(std::string session_id, std::vector<SessionEvent> recorded);

  /// Stamps, stores and writes the event; returns it as recorded.
  SessionEvent append(TimePoint ts, EventKind kind, nlohmann::json payload);

  std::vector<SessionEvent> since(std::uint64_t first_index) const;
  std::vector<SessionEvent> all() const { return since(0); }
  std::size_t size() const;

  /// Blocks until an event with index >= first_index exists, the log is
  /// sealed, or the timeout passes (wall time). Returns the new events.
  std::vector<SessionEvent> wait_since(std::uint64_t first_index, std::chrono::milliseconds timeout) const;

  /// No more events will follow.
  void seal();
  bool sealed() const;

  const std::string& session_id() const { return session_id_; }

 private:
  std::string session_id_;
  mutable std::mutex mutex_;
  mutable std::condition_variable cv_;
  std::vector<SessionEvent> events_;
  std::ofstream file_;
  bool sealed_ = false;
};

}  // namespace sar::gateway
