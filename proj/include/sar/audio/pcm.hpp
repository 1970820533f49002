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

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace sar::audio {

/// int16 -> [-1, 1) by dividing by 32768.
inline double normalize_sample(std::int16_t s) { return static_cast<double>(s) / 32768.0; }

/// Inverse of normalize_sample, rounding and saturating.
std::int16_t quantize_sample(double x);

std::vector<double> normalize(std::span<const std::int16_t> pcm);
std::vector<std::int16_t> quantize(std::span<const double> samples);

std::vector<std::uint8_t> pcm_to_le_bytes(std::span<const std::int16_t> pcm);
/// Throws std::invalid_argument on an odd byte count.
std::vector<std::int16_t> pcm_from_le_bytes(std::span<const std::uint8_t> bytes);

/// Mono PCM s16le audio.
struct WavAudio {
  unsigned sample_rate_hz = 16000;
  std::vector<std::int16_t> pcm;
};

class WavError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

WavAudio read_wav(const std::filesystem::path& path);
WavAudio parse_wav(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_wav(const WavAudio& audio);
void write_wav(const std::filesystem::path& path, const WavAudio& audio);

}  // namespace sar::audio
