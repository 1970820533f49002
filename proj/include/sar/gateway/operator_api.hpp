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

#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace sar::gateway {

class Gateway;

/// HTTP and server-sent-events endpoints for operators:
///
///   GET  /api/sessions
///   GET  /api/sessions/{id}
///   GET  /api/sessions/{id}/events?since=N
///   GET  /api/sessions/{id}/stream          (text/event-stream)
///   GET  /api/sessions/{id}/log             (NDJSON download)
///   GET  /api/sessions/{id}/script
///   PUT  /api/sessions/{id}/script          {"script_id": "..."}
///   GET  /api/scripts
///   GET  /api/scripts/{id}
///   PUT  /api/scripts/{id}
///   GET  /api/children/{id}/model
///   GET  /api/children/{id}/preferences
///   PUT  /api/children/{id}/preferences     {"key": "value", ...}
class OperatorApi {
 public:
  explicit OperatorApi(Gateway& gateway);
  ~OperatorApi();

  OperatorApi(const OperatorApi&) = delete;
  OperatorApi& operator=(const OperatorApi&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port;
  /// returns the bound port. Throws std::runtime_error when binding fails.
  int start(const std::string& host, int port);
  void stop();

 private:
  void routes();

  Gateway& gateway_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace sar::gateway
