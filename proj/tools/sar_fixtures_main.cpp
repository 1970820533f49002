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

// Writes the deterministic fixture set used by the mock backends: one
// synthetic face image per emotion, an image with no registered face, a
// spoken-sentence recording, and the manifest mapping their hashes to labels.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"
#include "sar/audio/pcm.hpp"
#include "sar/audio/recorder.hpp"
#include "sar/audio/rms.hpp"
#include "sar/cognition/image.hpp"
#include "sar/cognition/manifest.hpp"

namespace {

constexpr unsigned kRate = 16000;
constexpr std::uint32_t kSide = 16;

sar::Image face(std::size_t variant) {
  sar::Image img{kSide, kSide, {}};
  img.rgb.reserve(kSide * kSide * 3);
  for (std::uint32_t y = 0; y < kSide; ++y) {
    for (std::uint32_t x = 0; x < kSide; ++x) {
      img.rgb.push_back(static_cast<std::uint8_t>((x * 16 + variant * 40) % 256));
      img.rgb.push_back(static_cast<std::uint8_t>((y * 16 + variant * 70) % 256));
      img.rgb.push_back(static_cast<std::uint8_t>((x * y + variant * 90) % 256));
    }
  }
  return img;
}

void tone(std::vector<double>& out, double seconds, double hz, double amplitude) {
  auto n = static_cast<std::size_t>(seconds * kRate);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(amplitude * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / kRate));
  }
}

void silence(std::vector<double>& out, double seconds) { out.resize(out.size() + static_cast<std::size_t>(seconds * kRate)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the mock-backend fixture set"};
  std::filesystem::path out = "data/fixtures";
  std::size_t fragment_size = 16000;
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--fragment-size", fragment_size, "Samples per audio fragment")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out);
  sar::FixtureManifest manifest;

  for (std::size_t i = 0; i < sar::kEmotions.size(); ++i) {
    auto name = std::string(sar::emotion_name(sar::kEmotions[i]));
    auto img = face(i);
    sar::write_ppm(out / (name + ".ppm"), img);
    manifest.add(sar::image_hash(img), {sar::FixtureKind::kEmotion, name});
  }
  sar::write_ppm(out / "no_face.ppm", face(sar::kEmotions.size()));

  // "i am happy": two 0.75 s voiced stretches framed by silence. The recorder
  // turns it into exactly two fragments, one per phrase.
  std::vector<double> samples;
  silence(samples, 0.5);
  tone(samples, 0.75, 220.0, 0.5);
  tone(samples, 0.75, 330.0, 0.5);
  silence(samples, 1.0);
  auto pcm = sar::audio::quantize(samples);
  sar::audio::write_wav(out / "i_am_happy.wav", {kRate, pcm});

  // Label the fragments exactly as a robot would cut them.
  auto normalized = sar::audio::normalize(pcm);
  sar::audio::UtteranceRecorder recorder({}, fragment_size);
  std::vector<std::vector<double>> fragments;
  std::vector<double> whole;
  auto window = sar::audio::window_length(kRate);
  auto collect = [&](const std::vector<sar::audio::RecorderEvent>& events) {
    for (const auto& ev : events) {
      if (const auto* f = std::get_if<sar::audio::FragmentReady>(&ev)) {
        fragments.push_back(f->samples);
        whole.insert(whole.end(), f->samples.begin(), f->samples.end());
      }
    }
  };
  for (std::size_t off = 0; off < normalized.size(); off += window) {
    std::span<const double> w(normalized.data() + off, std::min(window, normalized.size() - off));
    collect(recorder.push_window(w, sar::audio::compute_rms(w)));
  }
  collect(recorder.finish());
  if (fragments.size() != 2) {
    std::cerr << "sar-fixtures: expected 2 fragments, recorder produced " << fragments.size() << '\n';
    return 1;
  }
  manifest.add(sar::audio_hash(fragments[0]), {sar::FixtureKind::kTranscript, "i am"});
  manifest.add(sar::audio_hash(fragments[1]), {sar::FixtureKind::kTranscript, "happy"});
  manifest.add(sar::audio_hash(whole), {sar::FixtureKind::kTranscript, "i am happy"});

  manifest.save(out / "manifest.json");
  std::cout << "wrote " << manifest.entries().size() << " manifest entries to " << out.string() << '\n';
  return 0;
}
