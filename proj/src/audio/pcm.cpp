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

#include "sar/audio/pcm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

namespace sar::audio {
namespace {

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return std::uint32_t{b[at]} | (std::uint32_t{b[at + 1]} << 8) | (std::uint32_t{b[at + 2]} << 16) |
         (std::uint32_t{b[at + 3]} << 24);
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, std::string_view tag) {
  return std::equal(tag.begin(), tag.end(), b.begin() + static_cast<std::ptrdiff_t>(at));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, std::string_view tag) { out.insert(out.end(), tag.begin(), tag.end()); }

}  // namespace

std::int16_t quantize_sample(double x) {
  double scaled = std::round(x * 32768.0);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

std::vector<double> normalize(std::span<const std::int16_t> pcm) {
  std::vector<double> out(pcm.size());
  std::transform(pcm.begin(), pcm.end(), out.begin(), normalize_sample);
  return out;
}

std::vector<std::int16_t> quantize(std::span<const double> samples) {
  std::vector<std::int16_t> out(samples.size());
  std::transform(samples.begin(), samples.end(), out.begin(), quantize_sample);
  return out;
}

std::vector<std::uint8_t> pcm_to_le_bytes(std::span<const std::int16_t> pcm) {
  std::vector<std::uint8_t> out;
  out.reserve(pcm.size() * 2);
  for (std::int16_t s : pcm) {
    auto u = static_cast<std::uint16_t>(s);
    out.push_back(static_cast<std::uint8_t>(u & 0xFF));
    out.push_back(static_cast<std::uint8_t>(u >> 8));
  }
  return out;
}

std::vector<std::int16_t> pcm_from_le_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 2 != 0) throw std::invalid_argument("pcm byte count must be even");
  std::vector<std::int16_t> out(bytes.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::int16_t>(read_u16(bytes, 2 * i));
  return out;
}

WavAudio parse_wav(std::span<const std::uint8_t> b) {
  if (b.size() < 12 || !tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE")) throw WavError("not a RIFF/WAVE file");
  WavAudio out;
  bool have_fmt = false;
  std::size_t at = 12;
  while (at + 8 <= b.size()) {
    std::uint32_t size = read_u32(b, at + 4);
    std::size_t body = at + 8;
    if (body + size > b.size()) throw WavError("truncated chunk");
    if (tag_is(b, at, "fmt ")) {
      if (size < 16) throw WavError("short fmt chunk");
      std::uint16_t format = read_u16(b, body);
      std::uint16_t channels = read_u16(b, body + 2);
      std::uint16_t bits = read_u16(b, body + 14);
      if (format != 1 || channels != 1 || bits != 16) throw WavError("only mono PCM s16le is supported");
      out.sample_rate_hz = read_u32(b, body + 4);
      if (out.sample_rate_hz == 0) throw WavError("zero sample rate");
      have_fmt = true;
    } else if (tag_is(b, at, "data")) {
      if (!have_fmt) throw WavError("data chunk before fmt chunk");
      out.pcm.resize(size / 2);
      for (std::size_t i = 0; i < out.pcm.size(); ++i) {
        out.pcm[i] = static_cast<std::int16_t>(read_u16(b, body + 2 * i));
      }
      return out;
    }
    at = body + size + (size & 1u);
  }
  throw WavError("no data chunk");
}

WavAudio read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_wav(bytes);
}

std::vector<std::uint8_t> encode_wav(const WavAudio& audio) {
  auto data_bytes = static_cast<std::uint32_t>(audio.pcm.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, audio.sample_rate_hz);
  put_u32(out, audio.sample_rate_hz * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (std::int16_t s : audio.pcm) put_u16(out, static_cast<std::uint16_t>(s));
  return out;
}

void write_wav(const std::filesystem::path& path, const WavAudio& audio) {
  auto bytes = encode_wav(audio);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw WavError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace sar::audio
