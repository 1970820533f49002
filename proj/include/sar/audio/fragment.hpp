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
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sar::audio {

struct AudioFragment {
  std::string utterance_id;
  std::uint32_t index = 0;
  std::vector<double> samples;

  bool operator==(const AudioFragment&) const = default;
};

class EmptyUtterance : public std::invalid_argument {
 public:
  EmptyUtterance() : std::invalid_argument("cannot fragment an empty utterance") {}
};

class ReassemblyError : public std::runtime_error {
 public:
  enum class Kind { kIncompleteUtterance, kDuplicateFragment, kCountMismatch };

  ReassemblyError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

const char* reassembly_error_name(ReassemblyError::Kind kind);

/// Splits into fragments of `fragment_size` samples; only the last may be shorter.
/// Throws EmptyUtterance for empty input, std::invalid_argument for size 0.
std::vector<AudioFragment> fragment(const std::string& utterance_id, std::span<const double> samples,
                                    std::size_t fragment_size);

/// Concatenates fragments in index order. Arrival order is irrelevant; the
/// indices must be exactly 0..declared_count-1.
std::vector<double> reassemble(std::span<const AudioFragment> fragments, std::size_t declared_count);

}  // namespace sar::audio
