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

#include <algorithm>
#include <chrono>
#include <cmath>

#include "httplib.h"
#include "json.hpp"
#include "sar/audio/pcm.hpp"
#include "sar/cognition/backends.hpp"
#include "sar/common/encoding.hpp"

namespace sar {
namespace {

using nlohmann::json;

template <typename Rep, typename Period>
void set_timeout(httplib::Client& client, void (httplib::Client::*setter)(time_t, time_t),
                 std::chrono::duration<Rep, Period> d) {
  auto us = std::chrono::duration_cast<std::chrono::microseconds>(d).count();
  if (us < 1000) us = 1000;
  (client.*setter)(static_cast<time_t>(us / 1000000), static_cast<time_t>(us % 1000000));
}

// Connect gets its own budget; reading and writing share what is left of the total.
json post_json(const RemoteEndpoint& ep, const std::string& path, const json& body) {
  httplib::Client client(ep.host, ep.port);
  auto io_budget = ep.total_timeout - ep.connect_timeout;
  if (io_budget <= std::chrono::milliseconds::zero()) io_budget = ep.total_timeout;
  set_timeout(client, &httplib::Client::set_connection_timeout, ep.connect_timeout);
  set_timeout(client, &httplib::Client::set_read_timeout, io_budget);
  set_timeout(client, &httplib::Client::set_write_timeout, io_budget);

  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    throw BackendUnavailable("request to " + ep.host + ":" + std::to_string(ep.port) + path +
                             " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw BackendUnavailable("backend answered HTTP " + std::to_string(res->status));
  }
  try {
    return json::parse(res->body);
  } catch (const json::exception& e) {
    throw BackendUnavailable(std::string("backend reply is not JSON: ") + e.what());
  }
}

}  // namespace

RecognitionResult RemoteEmotionRecognizer::classify(const Image& image) {
  image.validate();
  json reply = post_json(endpoint_, endpoint_.emotion_path,
                         {{"width", image.width}, {"height", image.height}, {"pixels", base64_encode(image.rgb)}});
  try {
    if (reply.contains("error")) return NoFace{};
    const json& scores = reply.at("scores");
    EmotionScores out;
    out.service = ServiceKind::kRemote;
    for (Emotion e : kEmotions) {
      out[e] = std::clamp(scores.at(std::string(emotion_name(e))).get<double>(), 0.0, 1.0);
    }
    return out;
  } catch (const json::exception& e) {
    throw BackendUnavailable(std::string("malformed emotion reply: ") + e.what());
  }
}

std::string RemoteSpeechToText::transcribe(std::span<const double> samples, unsigned sample_rate_hz) {
  auto pcm = audio::quantize(samples);
  json reply = post_json(endpoint_, endpoint_.transcript_path,
                         {{"sample_rate_hz", sample_rate_hz}, {"pcm_s16le", base64_encode(audio::pcm_to_le_bytes(pcm))}});
  try {
    return reply.at("transcript").get<std::string>();
  } catch (const json::exception& e) {
    throw BackendUnavailable(std::string("malformed transcript reply: ") + e.what());
  }
}

SentimentScore RemoteSentimentAnalyzer::analyze(std::string_view text) {
  json reply = post_json(endpoint_, endpoint_.sentiment_path, {{"text", std::string(text)}});
  try {
    double v = reply.at("value").get<double>();
    if (std::isnan(v)) throw BackendUnavailable("sentiment reply is NaN");
    return SentimentScore(std::clamp(v, 0.0, 1.0));
  } catch (const json::exception& e) {
    throw BackendUnavailable(std::string("malformed sentiment reply: ") + e.what());
  }
}

}  // namespace sar
