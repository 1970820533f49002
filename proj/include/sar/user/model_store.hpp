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
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "sar/user/user_model.hpp"

namespace sar::user {

class NotFound : public std::runtime_error {
 public:
  explicit NotFound(const std::string& id) : std::runtime_error("no record for '" + id + "'") {}
};

class StorageUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kModelRecordVersion = 1;

/// One append-only file per child under `directory`. Each line is a complete
/// versioned record ({"version": 1, "model": {...}}); the last valid line wins.
///
/// Mutations of one child are serialized; different children proceed in
/// parallel.
class ModelStore {
 public:
  explicit ModelStore(std::filesystem::path directory);

  void persist(const UserModel& model);
  /// Throws NotFound or StorageUnavailable.
  UserModel load(const std::string& child_id);
  bool exists(const std::string& child_id);

  /// Atomic read-modify-write. A missing child starts from an empty model.
  UserModel update(const std::string& child_id, const std::function<void(UserModel&)>& mutate);

  std::vector<std::string> children() const;

  std::filesystem::path path_for(const std::string& child_id) const;

 private:
  std::mutex& lock_for(const std::string& child_id);
  UserModel load_unlocked(const std::string& child_id);
  void persist_unlocked(const UserModel& model);

  std::filesystem::path directory_;
  std::mutex locks_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

/// The shared script library, persisted as one JSON array.
class ScriptLibrary {
 public:
  ScriptLibrary() = default;
  ScriptLibrary(std::vector<BehaviorScript> scripts, std::optional<std::filesystem::path> file);
  /// Not thread-safe with respect to `other`.
  ScriptLibrary(ScriptLibrary&& other) noexcept
      : scripts_(std::move(other.scripts_)), file_(std::move(other.file_)) {}

  /// Reads `file` when it exists, otherwise starts from `seed`.
  static ScriptLibrary open(const std::filesystem::path& file, std::vector<BehaviorScript> seed);

  std::vector<BehaviorScript> list() const;
  std::optional<BehaviorScript> get(const std::string& script_id) const;

  /// Creates or replaces. Throws InvalidScript.
  void put(BehaviorScript script);
  void mark_used(const std::string& script_id, TimePoint ts);

 private:
  void save_unlocked() const;

  mutable std::shared_mutex mutex_;
  std::map<std::string, BehaviorScript> scripts_;
  std::optional<std::filesystem::path> file_;
};

}  // namespace sar::user
