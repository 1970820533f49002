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

#include "sar/audio/fragment.hpp"

#include <algorithm>
#include <vector>

namespace sar::audio {

const char* reassembly_error_name(ReassemblyError::Kind kind) {
  switch (kind) {
    case ReassemblyError::Kind::kIncompleteUtterance:
      return "IncompleteUtterance";
    case ReassemblyError::Kind::kDuplicateFragment:
      return "DuplicateFragment";
    case ReassemblyError::Kind::kCountMismatch:
      return "CountMismatch";
  }
  return "ReassemblyError";
}

std::vector<AudioFragment> fragment(const std::string& utterance_id, std::span<const double> samples,
                                    std::size_t fragment_size) {
  if (samples.empty()) throw EmptyUtterance();
  if (fragment_size == 0) throw std::invalid_argument("fragment size must be positive");
  std::vector<AudioFragment> out;
  out.reserve((samples.size() + fragment_size - 1) / fragment_size);
  for (std::size_t begin = 0; begin < samples.size(); begin += fragment_size) {
    std::size_t end = std::min(samples.size(), begin + fragment_size);
    out.push_back({utterance_id, static_cast<std::uint32_t>(out.size()),
                   {samples.begin() + static_cast<std::ptrdiff_t>(begin),
                    samples.begin() + static_cast<std::ptrdiff_t>(end)}});
  }
  return out;
}

std::vector<double> reassemble(std::span<const AudioFragment> fragments, std::size_t declared_count) {
  using Kind = ReassemblyError::Kind;
  for (const auto& f : fragments) {
    if (f.utterance_id != fragments.front().utterance_id) {
      throw std::invalid_argument("fragments belong to different utterances");
    }
  }

  std::vector<const AudioFragment*> slots(declared_count, nullptr);
  std::vector<std::uint32_t> seen;
  seen.reserve(fragments.size());
  for (const auto& f : fragments) seen.push_back(f.index);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw ReassemblyError(Kind::kDuplicateFragment, "fragment index received more than once");
  }
  for (const auto& f : fragments) {
    if (f.index >= declared_count) {
      throw ReassemblyError(Kind::kCountMismatch,
                            "fragment index " + std::to_string(f.index) + " beyond declared count " +
                                std::to_string(declared_count));
    }
    slots[f.index] = &f;
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] == nullptr) {
      throw ReassemblyError(Kind::kIncompleteUtterance, "fragment " + std::to_string(i) + " missing");
    }
  }

  std::size_t total = 0;
  for (const auto* f : slots) total += f->samples.size();
  std::vector<double> out;
  out.reserve(total);
  for (const auto* f : slots) out.insert(out.end(), f->samples.begin(), f->samples.end());
  return out;
}

}  // namespace sar::audio
