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

#include "sar/gateway/operator_api.hpp"

#include <chrono>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "sar/gateway/gateway.hpp"

namespace sar::gateway {
namespace {

using nlohmann::json;

constexpr auto kStreamPoll = std::chrono::milliseconds(500);

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response& res, int status, const std::string& message) {
  reply(res, status, {{"error", message}});
}

json summary(const Session& session) {
  auto s = session.state();
  auto ts = [](const std::optional<TimePoint>& t) { return t ? json(to_micros(*t)) : json(nullptr); };
  return {{"session_id", session.id()},
          {"robot_id", s.robot_id},
          {"child_id", s.child_id},
          {"started", ts(s.started)},
          {"ended", ts(s.ended)},
          {"live", session.connected()},
          {"active_script_id", s.active_script_id ? json(*s.active_script_id) : json(nullptr)},
          {"events", s.events}};
}

json events_json(const std::vector<SessionEvent>& events) {
  json out = json::array();
  for (const auto& e : events) out.push_back(to_json(e));
  return out;
}

std::string sse_frame(const SessionEvent& e) {
  std::ostringstream out;
  out << "id: " << e.index << "\nevent: " << event_kind_name(e.kind) << "\ndata: " << to_json(e).dump() << "\n\n";
  return out.str();
}

/// Parses a non-negative integer; nullopt on anything else.
std::optional<std::uint64_t> parse_index(const std::string& text) {
  if (text.empty() || text.size() > 19) return std::nullopt;
  std::uint64_t n = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    n = n * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return n;
}

/// Resume point of an event stream: ?since=N wins over Last-Event-ID.
std::optional<std::uint64_t> resume_index(const httplib::Request& req, bool& bad) {
  bad = false;
  if (req.has_param("since")) {
    auto n = parse_index(req.get_param_value("since"));
    if (!n) bad = true;
    return n;
  }
  if (req.has_header("Last-Event-ID")) {
    auto n = parse_index(req.get_header_value("Last-Event-ID"));
    if (!n) bad = true;
    return n ? std::optional<std::uint64_t>(*n + 1) : std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

OperatorApi::OperatorApi(Gateway& gateway) : gateway_(gateway), server_(std::make_unique<httplib::Server>()) {
  routes();
}

OperatorApi::~OperatorApi() { stop(); }

int OperatorApi::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind operator API on " + host);
  } else if (!server_->bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind operator API on " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void OperatorApi::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void OperatorApi::routes() {
  auto& srv = *server_;
  Gateway& gw = gateway_;

  // Runs `fn` with the session named in the path, answering 404 when unknown.
  auto with_session = [&gw](auto fn) {
    return [&gw, fn](const httplib::Request& req, httplib::Response& res) {
      std::shared_ptr<Session> session;
      try {
        session = gw.session(req.path_params.at("id"));
      } catch (const UnknownId& e) {
        fail(res, 404, e.what());
        return;
      }
      fn(*session, req, res);
    };
  };

  srv.Get("/api/sessions", [&gw](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const auto& s : gw.sessions()) out.push_back(summary(*s));
    reply(res, 200, out);
  });

  srv.Get("/api/sessions/:id", with_session([](Session& s, const httplib::Request&, httplib::Response& res) {
            auto state = to_json(s.state());
            state["live"] = s.connected();
            reply(res, 200, state);
          }));

  srv.Get("/api/sessions/:id/events", with_session([](Session& s, const httplib::Request& req, httplib::Response& res) {
            bool bad = false;
            auto since = resume_index(req, bad);
            if (bad) return fail(res, 400, "since must be a non-negative integer");
            reply(res, 200, events_json(s.log().since(since.value_or(0))));
          }));

  srv.Get("/api/sessions/:id/log", with_session([](Session& s, const httplib::Request&, httplib::Response& res) {
            std::string body;
            for (const auto& e : s.log().all()) body += to_json(e).dump() + "\n";
            res.set_header("Content-Disposition", "attachment; filename=\"" + s.id() + ".ndjson\"");
            res.set_content(body, "application/x-ndjson");
          }));

  srv.Get("/api/sessions/:id/stream",
          [&gw](const httplib::Request& req, httplib::Response& res) {
            std::shared_ptr<Session> session;
            try {
              session = gw.session(req.path_params.at("id"));
            } catch (const UnknownId& e) {
              return fail(res, 404, e.what());
            }
            bool bad = false;
            auto since = resume_index(req, bad);
            if (bad) return fail(res, 400, "since must be a non-negative integer");
            auto next = std::make_shared<std::uint64_t>(since.value_or(0));
            res.set_header("Cache-Control", "no-cache");
            res.set_chunked_content_provider(
                "text/event-stream", [session, next](std::size_t, httplib::DataSink& sink) {
                  const EventLog& log = session->log();
                  for (const auto& e : log.wait_since(*next, kStreamPoll)) {
                    auto frame = sse_frame(e);
                    if (!sink.write(frame.data(), frame.size())) return false;
                    *next = e.index + 1;
                  }
                  if (log.sealed() && *next >= log.size()) {
                    static constexpr std::string_view kEnd = "event: end\ndata: {}\n\n";
                    if (!sink.write(kEnd.data(), kEnd.size())) return false;
                    sink.done();
                    return true;
                  }
                  return sink.is_writable();
                });
          });

  srv.Get("/api/sessions/:id/script", with_session([](Session& s, const httplib::Request&, httplib::Response& res) {
            auto state = s.state();
            reply(res, 200,
                  {{"session_id", s.id()},
                   {"active_script_id", state.active_script_id ? json(*state.active_script_id) : json(nullptr)},
                   {"operator_override", state.operator_override}});
          }));

  srv.Put("/api/sessions/:id/script", [&gw](const httplib::Request& req, httplib::Response& res) {
    std::string script_id;
    try {
      script_id = json::parse(req.body).at("script_id").get<std::string>();
    } catch (const json::exception&) {
      return fail(res, 400, "body must be {\"script_id\": \"...\"}");
    }
    const auto& id = req.path_params.at("id");
    try {
      gw.activate_script(id, script_id);
    } catch (const UnknownId& e) {
      return fail(res, 404, e.what());
    } catch (const SessionEnded& e) {
      return fail(res, 409, e.what());
    }
    auto state = gw.session(id)->state();
    reply(res, 200, {{"session_id", id}, {"active_script_id", script_id}, {"operator_override", state.operator_override}});
  });

  srv.Get("/api/scripts", [&gw](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const auto& s : gw.scripts()) out.push_back(user::to_json(s));
    reply(res, 200, out);
  });

  srv.Get("/api/scripts/:id", [&gw](const httplib::Request& req, httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    for (const auto& s : gw.scripts()) {
      if (s.script_id == id) return reply(res, 200, user::to_json(s));
    }
    fail(res, 404, "unknown script '" + id + "'");
  });

  srv.Put("/api/scripts/:id", [&gw](const httplib::Request& req, httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception& e) {
      return fail(res, 400, std::string("body is not JSON: ") + e.what());
    }
    if (!body.is_object()) return fail(res, 422, "script must be a JSON object");
    if (!body.contains("script_id")) body["script_id"] = id;
    try {
      auto script = user::script_from_json(body);
      if (script.script_id != id) return fail(res, 422, "script_id does not match the path");
      script.last_used.reset();
      gw.put_script(script);
      reply(res, 200, user::to_json(script));
    } catch (const std::invalid_argument& e) {
      fail(res, 422, e.what());
    }
  });

  srv.Get("/api/children/:id/model", [&gw](const httplib::Request& req, httplib::Response& res) {
    try {
      reply(res, 200, user::to_json(gw.child_model(req.path_params.at("id"))));
    } catch (const UnknownId& e) {
      fail(res, 404, e.what());
    }
  });

  srv.Get("/api/children/:id/preferences", [&gw](const httplib::Request& req, httplib::Response& res) {
    try {
      reply(res, 200, gw.child_model(req.path_params.at("id")).preferences);
    } catch (const UnknownId& e) {
      fail(res, 404, e.what());
    }
  });

  srv.Put("/api/children/:id/preferences", [&gw](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> prefs;
    try {
      prefs = json::parse(req.body).get<std::map<std::string, std::string>>();
    } catch (const json::exception&) {
      return fail(res, 422, "preferences must be an object of strings");
    }
    reply(res, 200, gw.put_preferences(req.path_params.at("id"), std::move(prefs)).preferences);
  });

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      fail(res, 500, e.what());
    } catch (...) {
      fail(res, 500, "internal error");
    }
  });
}

}  // namespace sar::gateway
