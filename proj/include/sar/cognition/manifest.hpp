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

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sar/cognition/emotion.hpp"
#include "sar/cognition/image.hpp"

namespace sar {

enum class FixtureKind { kEmotion, kTranscript };

struct FixtureEntry {
  FixtureKind kind = FixtureKind::kEmotion;
  std::string label;
  bool operator==(const FixtureEntry&) const = default;
};

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maps SHA-256 content hashes to labelled results. Immutable once loaded.
///
/// File format: {"<sha256-hex>": {"kind": "emotion"|"transcript", "label": "..."}}
class FixtureManifest {
 public:
  FixtureManifest() = default;

  static FixtureManifest load(const std::filesystem::path& path);
  static FixtureManifest parse(const std::string& json_text);

  /// Throws ManifestError on a bad hash or label, or a duplicate hash.
  void add(const std::string& hash, FixtureEntry entry);
  void save(const std::filesystem::path& path) const;
  std::string dump() const;

  std::optional<Emotion> emotion_for(const std::string& hash) const;
  std::optional<std::string> transcript_for(const std::string& hash) const;

  const std::map<std::string, FixtureEntry>& entries() const { return entries_; }

 private:
  std::map<std::string, FixtureEntry> entries_;
};

/// Content hash of an image's RGB bytes.
std::string image_hash(const Image& image);

/// Content hash of audio: SHA-256 over its PCM s16le encoding.
std::string audio_hash(std::span<const double> samples);

}  // namespace sar
