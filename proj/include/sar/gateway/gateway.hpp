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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "sar/common/clock.hpp"
#include "sar/common/worker_pool.hpp"
#include "sar/gateway/config.hpp"
#include "sar/gateway/event_log.hpp"
#include "sar/gateway/session_state.hpp"
#include "sar/gateway/stream.hpp"
#include "sar/user/model_store.hpp"
#include "sar/wire/message.hpp"

namespace sar::gateway {

class Connection;

/// Unknown session, script or child.
class UnknownId : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The session is over; its script can no longer change.
class SessionEnded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One robot session. Events are folded into the state as they are logged, so
/// state() always equals replay(log().all()).
class Session {
 public:
  Session(std::string session_id, std::optional<std::filesystem::path> log_file);
  /// A finished session restored from its log.
  Session(std::string session_id, std::vector<SessionEvent> recorded);

  const std::string& id() const { return id_; }
  const EventLog& log() const { return log_; }
  SessionState state() const;

  /// Appends and applies; a no-op once the session has ended.
  std::optional<SessionEvent> record(TimePoint ts, EventKind kind, nlohmann::json payload);

  /// Records the final event and seals the log.
  void end(TimePoint ts, nlohmann::json payload);

  bool connected() const;

 private:
  friend class Gateway;
  friend class Connection;

  std::string id_;
  EventLog log_;
  mutable std::mutex mutex_;
  SessionState state_;
  std::shared_ptr<Connection> connection_;
};

/// The middleware core: serves robot connections, runs the image and audio
/// turns against the cognition backends, and exposes the operations behind
/// the operator API.
class Gateway {
 public:
  /// Creates `data_dir` and restores the sessions already recorded there.
  Gateway(GatewayConfig config, Backends backends, Clock& clock);
  ~Gateway();

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  /// Handles one robot connection until the robot shuts down its side. The
  /// calling thread must participate in the clock.
  void serve(std::shared_ptr<net::ByteStream> stream);

  /// Accepts robots on `listener` until it is closed, one thread each.
  void serve_tcp(net::TcpListener& listener);

  std::vector<std::shared_ptr<Session>> sessions() const;
  /// Throws UnknownId.
  std::shared_ptr<Session> session(const std::string& session_id) const;

  /// Operator override: logs operator_action and performs the script's steps
  /// on the robot. Throws UnknownId or SessionEnded.
  void activate_script(const std::string& session_id, const std::string& script_id);

  std::vector<user::BehaviorScript> scripts() const { return library_.list(); }
  /// Throws user::InvalidScript.
  void put_script(const user::BehaviorScript& script);

  /// Throws UnknownId.
  user::UserModel child_model(const std::string& child_id);
  user::UserModel put_preferences(const std::string& child_id, std::map<std::string, std::string> preferences);

  /// Operator mutations that do not belong to a session.
  const EventLog& operator_log() const { return operator_log_; }

  const GatewayConfig& config() const { return config_; }
  Clock& clock() { return clock_; }

 private:
  friend class Connection;

  std::shared_ptr<Session> open_session(const wire::Hello& hello);
  void perform_script(Session& session, Connection& connection, const user::BehaviorScript& script);
  std::filesystem::path sessions_dir() const { return config_.data_dir / "sessions"; }

  GatewayConfig config_;
  Backends backends_;
  Clock& clock_;
  user::ModelStore models_;
  user::ScriptLibrary library_;
  EventLog operator_log_;

  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::vector<std::weak_ptr<Connection>> connections_;
  std::uint64_t next_session_ = 1;

  std::mutex threads_mutex_;
  std::vector<std::thread> connection_threads_;

  WorkerPool pool_;
};

}  // namespace sar::gateway
