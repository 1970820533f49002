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

#include "sar/cognition/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sar/audio/pcm.hpp"
#include "sar/common/encoding.hpp"

namespace sar {
namespace {

bool is_sha256_hex(const std::string& s) {
  return s.size() == 64 && std::all_of(s.begin(), s.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

}  // namespace

FixtureManifest FixtureManifest::parse(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ManifestError("manifest must be a JSON object");
  FixtureManifest m;
  for (const auto& [hash, value] : j.items()) {
    if (!value.is_object() || !value.contains("kind") || !value.contains("label") ||
        !value["kind"].is_string() || !value["label"].is_string()) {
      throw ManifestError("manifest entry " + hash + " needs string kind and label");
    }
    auto kind = value["kind"].get<std::string>();
    FixtureEntry entry;
    if (kind == "emotion") {
      entry.kind = FixtureKind::kEmotion;
    } else if (kind == "transcript") {
      entry.kind = FixtureKind::kTranscript;
    } else {
      throw ManifestError("manifest entry " + hash + " has unknown kind '" + kind + "'");
    }
    entry.label = value["label"].get<std::string>();
    m.add(hash, std::move(entry));
  }
  return m;
}

FixtureManifest FixtureManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void FixtureManifest::add(const std::string& hash, FixtureEntry entry) {
  if (!is_sha256_hex(hash)) throw ManifestError("'" + hash + "' is not a lowercase SHA-256 hex digest");
  if (entry.kind == FixtureKind::kEmotion && !parse_emotion(entry.label)) {
    throw ManifestError("'" + entry.label + "' is not an emotion name");
  }
  if (entry.kind == FixtureKind::kTranscript && entry.label.empty()) {
    throw ManifestError("transcript label for " + hash + " is empty");
  }
  if (!entries_.emplace(hash, std::move(entry)).second) throw ManifestError("duplicate hash " + hash);
}

std::string FixtureManifest::dump() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [hash, entry] : entries_) {
    j[hash] = {{"kind", entry.kind == FixtureKind::kEmotion ? "emotion" : "transcript"},
               {"label", entry.label}};
  }
  return j.dump(2) + "\n";
}

void FixtureManifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ManifestError("cannot write manifest " + path.string());
  out << dump();
}

std::optional<Emotion> FixtureManifest::emotion_for(const std::string& hash) const {
  auto it = entries_.find(hash);
  if (it == entries_.end() || it->second.kind != FixtureKind::kEmotion) return std::nullopt;
  return parse_emotion(it->second.label);
}

std::optional<std::string> FixtureManifest::transcript_for(const std::string& hash) const {
  auto it = entries_.find(hash);
  if (it == entries_.end() || it->second.kind != FixtureKind::kTranscript) return std::nullopt;
  return it->second.label;
}

std::string image_hash(const Image& image) { return sha256_hex(image.rgb); }

std::string audio_hash(std::span<const double> samples) {
  return sha256_hex(audio::pcm_to_le_bytes(audio::quantize(samples)));
}

}  // namespace sar
