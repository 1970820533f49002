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

#include "sar/gateway/gateway.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <type_traits>
#include <variant>

#include "sar/audio/fragment.hpp"
#include "sar/audio/pcm.hpp"
#include "sar/common/channel.hpp"
#include "sar/common/encoding.hpp"
#include "sar/wire/frame.hpp"

namespace sar::gateway {
namespace {

using nlohmann::json;

std::string session_name(std::uint64_t n) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(n));
  return buf;
}

std::optional<std::uint64_t> session_number(const std::string& stem) {
  if (stem.size() < 2 || stem[0] != 's') return std::nullopt;
  std::uint64_t n = 0;
  for (std::size_t i = 1; i < stem.size(); ++i) {
    if (stem[i] < '0' || stem[i] > '9') return std::nullopt;
    n = n * 10 + static_cast<std::uint64_t>(stem[i] - '0');
  }
  return n;
}

json scores_json(const EmotionVector& v) {
  json out = json::object();
  for (Emotion e : kEmotions) out[std::string(emotion_name(e))] = v[index_of(e)];
  return out;
}

json seq_or_null(std::optional<std::uint64_t> seq) { return seq ? json(*seq) : json(nullptr); }

ServiceKind service_of(BackendKind kind) {
  return kind == BackendKind::kRemote ? ServiceKind::kRemote : ServiceKind::kMock;
}

struct FragmentText {
  std::uint32_t index = 0;
  std::string text;
  std::string error;  // non-empty when transcription failed
};

struct Utterance {
  std::string id;
  unsigned sample_rate_hz = 0;
  std::vector<audio::AudioFragment> fragments;
  std::shared_ptr<Channel<FragmentText>> results;
  std::size_t submitted = 0;
};

}  // namespace

// One robot connection. The reader thread runs run(); send() may also be
// called from operator threads.
class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(Gateway& gateway, std::shared_ptr<net::ByteStream> stream)
      : gw_(gateway), stream_(std::move(stream)) {}

  void run();
  void close() { stream_->close(); }

  std::uint64_t send(wire::Body body, std::optional<EventKind> kind, json payload);
  void send_behavior(const BehaviorCommand& command, std::optional<std::uint64_t> reply_to) {
    send(wire::Behavior{command, reply_to}, EventKind::kBehaviorSent,
         {{"command", user::to_json(command)}, {"reply_to", seq_or_null(reply_to)}});
  }

 private:
  void handle(const wire::Message& m);
  void on_hello(const wire::Hello& hello, std::uint64_t seq);
  void on_image(const wire::ImageRequest& req, std::uint64_t seq);
  void on_audio_start(const wire::AudioStart& start, std::uint64_t seq);
  void on_fragment(const wire::AudioFragment& frag, std::uint64_t seq);
  void on_audio_end(const wire::AudioEnd& end, std::uint64_t seq);

  void log(EventKind kind, json payload);
  void protocol_error(const std::string& message, std::optional<std::uint64_t> reply_to);
  /// Error event plus retry prompt; the robot is never left without an answer.
  void failed_turn(const std::string& source, const std::string& message, std::uint64_t reply_to);
  void retry_prompt(std::uint64_t reply_to) {
    send_behavior(BehaviorCommand::retry_prompt(gw_.config_.behavior.retry_phrase), reply_to);
  }
  void submit_transcription(Utterance& u, std::vector<audio::AudioFragment> fragments);

  Gateway& gw_;
  std::shared_ptr<net::ByteStream> stream_;

  std::mutex send_mutex_;
  std::uint64_t tx_seq_ = 0;
  bool write_failed_ = false;
  std::shared_ptr<Session> session_;  // written under send_mutex_

  std::uint64_t rx_seq_ = 0;
  std::optional<Utterance> utterance_;
};

std::uint64_t Connection::send(wire::Body body, std::optional<EventKind> kind, json payload) {
  std::lock_guard guard(send_mutex_);
  wire::Message message{tx_seq_, std::move(body)};
  auto frame = wire::encode_frame(message);
  ++tx_seq_;
  if (kind && session_) {
    payload["seq"] = message.seq;
    session_->record(gw_.clock_.now(), *kind, std::move(payload));
  }
  if (!write_failed_) {
    try {
      stream_->write(std::string_view(reinterpret_cast<const char*>(frame.data()), frame.size()));
    } catch (const net::StreamClosed&) {
      write_failed_ = true;
    }
  }
  return message.seq;
}

void Connection::log(EventKind kind, json payload) {
  if (session_) session_->record(gw_.clock_.now(), kind, std::move(payload));
}

void Connection::protocol_error(const std::string& message, std::optional<std::uint64_t> reply_to) {
  send(wire::Error{message, reply_to}, EventKind::kError,
       {{"source", "protocol"}, {"message", message}, {"reply_to", seq_or_null(reply_to)}});
}

void Connection::failed_turn(const std::string& source, const std::string& message, std::uint64_t reply_to) {
  log(EventKind::kError, {{"source", source}, {"message", message}, {"reply_to", reply_to}});
  retry_prompt(reply_to);
}

void Connection::run() {
  wire::FrameDecoder decoder;
  std::string reason = "eof";
  bool fatal = false;
  try {
    while (!fatal) {
      auto chunk = stream_->read_some();
      if (!chunk) break;
      decoder.append(*chunk);
      while (true) {
        std::optional<wire::Message> m;
        try {
          m = decoder.next();
        } catch (const wire::MalformedFrame& e) {
          protocol_error(std::string("malformed frame: ") + e.what(), std::nullopt);
          continue;
        } catch (const wire::FrameTooLarge& e) {
          protocol_error(e.what(), std::nullopt);
          reason = "frame too large";
          fatal = true;
          break;
        }
        if (!m) break;
        handle(*m);
      }
    }
  } catch (const std::exception& e) {
    reason = std::string("connection error: ") + e.what();
    fatal = true;
  }

  if (session_) {
    {
      std::lock_guard guard(session_->mutex_);
      session_->connection_.reset();
    }
    session_->end(gw_.clock_.now(), {{"reason", reason}});
  }
  if (fatal) {
    stream_->close();
  } else {
    stream_->shutdown_write();
  }
}

void Connection::handle(const wire::Message& m) {
  if (m.seq != rx_seq_) {
    std::string msg = "out-of-order frame: seq " + std::to_string(m.seq) + ", expected " + std::to_string(rx_seq_);
    rx_seq_ = m.seq + 1;
    protocol_error(msg, m.seq);
    return;
  }
  ++rx_seq_;
  if (m.type() != wire::MessageType::kHello && !session_) {
    protocol_error("no active session; send hello first", m.seq);
    return;
  }
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, wire::Hello>) {
          on_hello(body, m.seq);
        } else if constexpr (std::is_same_v<T, wire::ImageRequest>) {
          on_image(body, m.seq);
        } else if constexpr (std::is_same_v<T, wire::AudioStart>) {
          on_audio_start(body, m.seq);
        } else if constexpr (std::is_same_v<T, wire::AudioFragment>) {
          on_fragment(body, m.seq);
        } else if constexpr (std::is_same_v<T, wire::AudioEnd>) {
          on_audio_end(body, m.seq);
        } else {
          protocol_error("unexpected message type '" + std::string(wire::message_type_name(m.type())) +
                             "' from robot",
                         m.seq);
        }
      },
      m.body);
}

void Connection::on_hello(const wire::Hello& hello, std::uint64_t seq) {
  if (session_) {
    protocol_error("session " + session_->id() + " is already open on this connection", seq);
    return;
  }
  if (hello.child_id.empty()) {
    protocol_error("hello needs a child_id", seq);
    return;
  }
  auto session = gw_.open_session(hello);
  {
    std::lock_guard guard(send_mutex_);
    session_ = session;
  }

  std::optional<user::BehaviorScript> script;
  auto library = gw_.library_.list();
  if (!library.empty()) {
    try {
      script = user::choose_script(library, gw_.child_model(hello.child_id));
    } catch (const user::NoObservations&) {
    } catch (const std::exception& e) {
      log(EventKind::kWarning, {{"message", std::string("script selection skipped: ") + e.what()}});
    }
  }

  log(EventKind::kConnect, {{"seq", seq},
                            {"robot_id", hello.robot_id},
                            {"child_id", hello.child_id},
                            {"retry_limit", gw_.config_.behavior.retry_limit},
                            {"script_id", script ? json(script->script_id) : json(nullptr)}});
  {
    std::lock_guard guard(session->mutex_);
    session->connection_ = shared_from_this();
  }
  if (script) gw_.perform_script(*session, *this, *script);
}

void Connection::on_image(const wire::ImageRequest& req, std::uint64_t seq) {
  log(EventKind::kImageReceived, {{"seq", seq},
                                  {"width", req.width},
                                  {"height", req.height},
                                  {"sha256", sha256_hex(req.pixels)}});
  Image image{req.width, req.height, req.pixels};
  RecognitionResult result;
  try {
    image.validate();
    result = gw_.backends_.emotion->classify(image);
  } catch (const InvalidImage& e) {
    failed_turn("image", e.what(), seq);
    return;
  } catch (const BackendUnavailable& e) {
    failed_turn("backend", e.what(), seq);
    return;
  }

  if (const auto* scores = std::get_if<EmotionScores>(&result)) {
    send(wire::EmotionResult{scores->service, scores->values, std::nullopt}, EventKind::kEmotionResult,
         {{"reply_to", seq}, {"service", service_name(scores->service)}, {"scores", scores_json(scores->values)}});
    const std::string& child = session_->state().child_id;
    try {
      gw_.models_.update(child, [&](user::UserModel& m) {
        m = user::observe_emotion(std::move(m), *scores, gw_.clock_.now(), gw_.config_.alpha);
      });
    } catch (const std::exception& e) {
      log(EventKind::kWarning, {{"message", std::string("user model not updated: ") + e.what()}});
    }
    auto label = behavior::predominant_emotion(*scores);
    send_behavior(behavior::select_animation(label, gw_.config_.behavior.animations), seq);
    return;
  }

  const auto& no_face = std::get<NoFace>(result);
  auto hits_before = session_->state().retry_limit_hits;
  auto service = service_of(gw_.config_.backend);
  send(wire::EmotionResult{service, std::nullopt, no_face.message}, EventKind::kEmotionResult,
       {{"reply_to", seq}, {"service", service_name(service)}, {"error", no_face.message}});
  auto state = session_->state();
  if (state.retry_limit_hits > hits_before) {
    log(EventKind::kRetryLimitReached, {{"reply_to", seq}, {"limit", state.retry_limit}});
  }
  send_behavior(behavior::handle_recognition_error(gw_.config_.behavior.retry_phrase), seq);
}

void Connection::on_audio_start(const wire::AudioStart& start, std::uint64_t seq) {
  if (utterance_) {
    log(EventKind::kWarning, {{"message", "utterance abandoned by a new audio_start"},
                              {"utterance_id", utterance_->id}});
    utterance_.reset();
  }
  if (start.sample_rate_hz == 0 || start.utterance_id.empty()) {
    protocol_error("audio_start needs an utterance_id and a positive sample rate", seq);
    return;
  }
  log(EventKind::kSpeechStart,
      {{"seq", seq}, {"utterance_id", start.utterance_id}, {"sample_rate_hz", start.sample_rate_hz}});
  Utterance u;
  u.id = start.utterance_id;
  u.sample_rate_hz = start.sample_rate_hz;
  u.results = std::make_shared<Channel<FragmentText>>(gw_.clock_);
  utterance_ = std::move(u);
}

void Connection::on_fragment(const wire::AudioFragment& frag, std::uint64_t seq) {
  if (!utterance_ || utterance_->id != frag.utterance_id) {
    protocol_error("audio_fragment for unknown utterance '" + frag.utterance_id + "'", seq);
    return;
  }
  log(EventKind::kFragmentReceived, {{"seq", seq},
                                     {"utterance_id", frag.utterance_id},
                                     {"index", frag.index},
                                     {"samples", frag.pcm.size()}});
  audio::AudioFragment f{frag.utterance_id, frag.index, audio::normalize(frag.pcm)};
  utterance_->fragments.push_back(f);
  if (gw_.config_.pipeline == PipelineMode::kPipelined) submit_transcription(*utterance_, {std::move(f)});
}

void Connection::submit_transcription(Utterance& u, std::vector<audio::AudioFragment> fragments) {
  u.submitted += fragments.size();
  gw_.pool_.submit([speech = gw_.backends_.speech, results = u.results, rate = u.sample_rate_hz,
                    fragments = std::move(fragments)] {
    for (const auto& f : fragments) {
      FragmentText out{f.index, {}, {}};
      try {
        out.text = speech->transcribe(f.samples, rate);
      } catch (const std::exception& e) {
        out.error = e.what();
      }
      results->push(std::move(out));
    }
  });
}

void Connection::on_audio_end(const wire::AudioEnd& end, std::uint64_t seq) {
  if (!utterance_ || utterance_->id != end.utterance_id) {
    protocol_error("audio_end for unknown utterance '" + end.utterance_id + "'", seq);
    return;
  }
  Utterance u = std::move(*utterance_);
  utterance_.reset();
  log(EventKind::kUtteranceComplete, {{"seq", seq},
                                      {"utterance_id", u.id},
                                      {"fragment_count", end.fragment_count},
                                      {"received", u.fragments.size()}});

  if (end.fragment_count == 0 && u.fragments.empty()) {
    log(EventKind::kWarning, {{"message", "empty utterance"}, {"utterance_id", u.id}, {"reply_to", seq}});
    retry_prompt(seq);
    return;
  }
  std::vector<double> whole;
  try {
    whole = audio::reassemble(u.fragments, end.fragment_count);
  } catch (const audio::ReassemblyError& e) {
    log(EventKind::kError, {{"source", "reassembly"},
                            {"reason", audio::reassembly_error_name(e.kind())},
                            {"message", e.what()},
                            {"utterance_id", u.id},
                            {"reply_to", seq}});
    retry_prompt(seq);
    return;
  }

  if (gw_.config_.pipeline == PipelineMode::kSequential) {
    auto ordered = u.fragments;
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
    submit_transcription(u, std::move(ordered));
  }
  std::vector<std::string> texts(end.fragment_count);
  std::string failure;
  for (std::size_t i = 0; i < u.submitted; ++i) {
    auto r = u.results->pop();
    if (!r) break;
    if (!r->error.empty()) {
      failure = r->error;
    } else {
      texts[r->index] = r->text;
    }
  }
  if (!failure.empty()) {
    failed_turn("backend", failure, seq);
    return;
  }

  std::string transcript;
  for (const auto& t : texts) {
    if (t.empty()) continue;
    if (!transcript.empty()) transcript += ' ';
    transcript += t;
  }
  double sentiment = 0.5;
  try {
    if (transcript.empty()) transcript = gw_.backends_.speech->transcribe(whole, u.sample_rate_hz);
    log(EventKind::kTranscript, {{"utterance_id", u.id}, {"text", transcript}});
    sentiment = gw_.backends_.sentiment->analyze(transcript).value();
  } catch (const BackendUnavailable& e) {
    failed_turn("backend", e.what(), seq);
    return;
  }

  auto band = behavior::sentiment_band(sentiment);
  send(wire::UtteranceResult{u.id, transcript, sentiment}, EventKind::kSentiment,
       {{"utterance_id", u.id}, {"transcript", transcript}, {"value", sentiment}, {"band", behavior::band_name(band)}});
  auto turns = session_->state().band_turns[static_cast<std::size_t>(band)];
  send_behavior(behavior::select_response(band, gw_.config_.behavior.phrases, turns - 1), seq);
}

// Session ------------------------------------------------------------------

Session::Session(std::string session_id, std::optional<std::filesystem::path> log_file)
    : id_(std::move(session_id)), log_(id_, std::move(log_file)) {}

Session::Session(std::string session_id, std::vector<SessionEvent> recorded)
    : id_(std::move(session_id)), log_(id_, recorded), state_(replay(recorded)) {}

SessionState Session::state() const {
  std::lock_guard guard(mutex_);
  return state_;
}

std::optional<SessionEvent> Session::record(TimePoint ts, EventKind kind, json payload) {
  std::lock_guard guard(mutex_);
  if (state_.ended || log_.sealed()) return std::nullopt;
  auto event = log_.append(ts, kind, std::move(payload));
  apply(state_, event);
  return event;
}

void Session::end(TimePoint ts, json payload) {
  std::lock_guard guard(mutex_);
  if (state_.ended || log_.sealed()) return;
  apply(state_, log_.append(ts, EventKind::kDisconnect, std::move(payload)));
  log_.seal();
}

bool Session::connected() const {
  std::lock_guard guard(mutex_);
  return connection_ != nullptr;
}

// Gateway ------------------------------------------------------------------

Gateway::Gateway(GatewayConfig config, Backends backends, Clock& clock)
    : config_(std::move(config)),
      backends_(std::move(backends)),
      clock_(clock),
      models_((std::filesystem::create_directories(config_.data_dir), config_.data_dir / "models")),
      library_(user::ScriptLibrary::open(config_.data_dir / "scripts.json", config_.scripts)),
      operator_log_("operator", config_.data_dir / "operator.ndjson"),
      pool_(clock, std::max<std::size_t>(1, config_.workers)) {
  std::filesystem::create_directories(sessions_dir());
  std::vector<std::filesystem::path> logs;
  for (const auto& entry : std::filesystem::directory_iterator(sessions_dir())) {
    if (entry.path().extension() == ".ndjson") logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());
  for (const auto& path : logs) {
    auto stem = path.stem().string();
    auto n = session_number(stem);
    if (!n) continue;
    next_session_ = std::max(next_session_, *n + 1);
    try {
      sessions_[stem] = std::make_shared<Session>(stem, read_event_log(path));
    } catch (const std::exception& e) {
      std::cerr << "sar-gateway: skipping unreadable session log " << path << ": " << e.what() << '\n';
    }
  }
}

Gateway::~Gateway() {
  std::vector<std::shared_ptr<Connection>> live;
  {
    std::lock_guard guard(sessions_mutex_);
    for (auto& weak : connections_) {
      if (auto c = weak.lock()) live.push_back(std::move(c));
    }
  }
  for (auto& c : live) c->close();
  std::lock_guard guard(threads_mutex_);
  for (auto& t : connection_threads_) {
    if (t.joinable()) t.join();
  }
}

void Gateway::serve(std::shared_ptr<net::ByteStream> stream) {
  auto connection = std::make_shared<Connection>(*this, std::move(stream));
  {
    std::lock_guard guard(sessions_mutex_);
    std::erase_if(connections_, [](const auto& w) { return w.expired(); });
    connections_.push_back(connection);
  }
  connection->run();
}

void Gateway::serve_tcp(net::TcpListener& listener) {
  while (auto stream = listener.accept()) {
    std::lock_guard guard(threads_mutex_);
    connection_threads_.push_back(spawn_participant(clock_, [this, stream] { serve(stream); }));
  }
}

std::shared_ptr<Session> Gateway::open_session(const wire::Hello& hello) {
  std::shared_ptr<Session> session;
  {
    std::lock_guard guard(sessions_mutex_);
    auto id = session_name(next_session_++);
    session = std::make_shared<Session>(id, sessions_dir() / (id + ".ndjson"));
    sessions_[id] = session;
  }
  try {
    models_.update(hello.child_id, [&](user::UserModel& m) {
      m.child_id = hello.child_id;
      m.sessions.push_back(session->id());
    });
  } catch (const std::exception& e) {
    std::cerr << "sar-gateway: cannot update model of " << hello.child_id << ": " << e.what() << '\n';
  }
  return session;
}

void Gateway::perform_script(Session& session, Connection& connection, const user::BehaviorScript& script) {
  library_.mark_used(script.script_id, clock_.now());
  std::map<std::string, std::string> preferences;
  try {
    preferences = models_.load(session.state().child_id).preferences;
  } catch (const std::exception&) {
  }
  for (auto step : script.steps) {
    step.text = user::render_template(step.text, preferences);
    connection.send_behavior(step, std::nullopt);
  }
}

std::vector<std::shared_ptr<Session>> Gateway::sessions() const {
  std::lock_guard guard(sessions_mutex_);
  std::vector<std::shared_ptr<Session>> out;
  for (const auto& [id, s] : sessions_) out.push_back(s);
  return out;
}

std::shared_ptr<Session> Gateway::session(const std::string& session_id) const {
  std::lock_guard guard(sessions_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw UnknownId("unknown session '" + session_id + "'");
  return it->second;
}

void Gateway::activate_script(const std::string& session_id, const std::string& script_id) {
  auto s = session(session_id);
  auto script = library_.get(script_id);
  if (!script) throw UnknownId("unknown script '" + script_id + "'");
  std::shared_ptr<Connection> connection;
  {
    std::lock_guard guard(s->mutex_);
    connection = s->connection_;
  }
  if (!connection) throw SessionEnded("session '" + session_id + "' has ended");
  if (!s->record(clock_.now(), EventKind::kOperatorAction, {{"action", "activate_script"}, {"script_id", script_id}})) {
    throw SessionEnded("session '" + session_id + "' has ended");
  }
  perform_script(*s, *connection, *script);
}

void Gateway::put_script(const user::BehaviorScript& script) {
  library_.put(script);
  operator_log_.append(clock_.now(), EventKind::kOperatorAction,
                       {{"action", "put_script"}, {"script", user::to_json(script)}});
}

user::UserModel Gateway::child_model(const std::string& child_id) {
  try {
    return models_.load(child_id);
  } catch (const user::NotFound&) {
    throw UnknownId("unknown child '" + child_id + "'");
  }
}

user::UserModel Gateway::put_preferences(const std::string& child_id, std::map<std::string, std::string> preferences) {
  auto model = models_.update(child_id, [&](user::UserModel& m) {
    m.child_id = child_id;
    m.preferences = preferences;
  });
  operator_log_.append(clock_.now(), EventKind::kOperatorAction,
                       {{"action", "put_preferences"}, {"child_id", child_id}, {"preferences", preferences}});
  return model;
}

}  // namespace sar::gateway
