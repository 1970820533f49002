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

#include "sar/audio/rms.hpp"

#include <cmath>

#include <omp.h>

namespace sar::audio {
namespace {

double mean_square(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc / static_cast<double>(n);
}

void check_window(std::size_t window_len) {
  if (window_len == 0) throw EmptyWindow();
}

}  // namespace

double compute_rms(std::span<const double> window) {
  if (window.empty()) throw EmptyWindow();
  return std::sqrt(mean_square(window.data(), window.size()));
}

std::vector<double> windowed_rms_serial(std::span<const double> samples, std::size_t window_len) {
  check_window(window_len);
  std::size_t windows = samples.size() / window_len;
  std::vector<double> out(windows);
  for (std::size_t w = 0; w < windows; ++w) {
    out[w] = std::sqrt(mean_square(samples.data() + w * window_len, window_len));
  }
  return out;
}

std::vector<double> windowed_rms_parallel(std::span<const double> samples, std::size_t window_len) {
  check_window(window_len);
  const auto windows = static_cast<std::ptrdiff_t>(samples.size() / window_len);
  std::vector<double> out(static_cast<std::size_t>(windows));
  const double* data = samples.data();
  double* result = out.data();

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t w = 0; w < windows; ++w) {
    result[w] = std::sqrt(mean_square(data + w * static_cast<std::ptrdiff_t>(window_len), window_len));
  }
  return out;
}

}  // namespace sar::audio
