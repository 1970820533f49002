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

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sar::audio {

class EmptyWindow : public std::invalid_argument {
 public:
  EmptyWindow() : std::invalid_argument("RMS of an empty window") {}
};

/// Samples per analysis window: a tenth of a second, rounded down.
constexpr std::size_t window_length(unsigned sample_rate_hz) { return sample_rate_hz / 10; }

/// sqrt(mean(x^2)). Throws EmptyWindow.
double compute_rms(std::span<const double> window);

/// RMS of every complete, non-overlapping window of `window_len` samples.
/// A partial trailing window is discarded.
///
/// The serial routine is the reference; the parallel one splits windows across
/// OpenMP threads and must agree with it to rounding.
std::vector<double> windowed_rms_serial(std::span<const double> samples, std::size_t window_len);
std::vector<double> windowed_rms_parallel(std::span<const double> samples, std::size_t window_len);

}  // namespace sar::audio
