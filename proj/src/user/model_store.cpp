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

#include "sar/user/model_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace sar::user {
namespace {

using nlohmann::json;

std::string file_stem_for(const std::string& id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : id) {
    bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (safe) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string id_from_stem(const std::string& stem) {
  std::string out;
  for (std::size_t i = 0; i < stem.size(); ++i) {
    if (stem[i] == '%' && i + 2 < stem.size()) {
      out.push_back(static_cast<char>(std::stoi(stem.substr(i + 1, 2), nullptr, 16)));
      i += 2;
    } else {
      out.push_back(stem[i]);
    }
  }
  return out;
}

}  // namespace

ModelStore::ModelStore(std::filesystem::path directory) : directory_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) throw StorageUnavailable("cannot create model directory " + directory_.string() + ": " + ec.message());
}

std::filesystem::path ModelStore::path_for(const std::string& child_id) const {
  return directory_ / (file_stem_for(child_id) + ".ndjson");
}

std::mutex& ModelStore::lock_for(const std::string& child_id) {
  std::lock_guard guard(locks_mutex_);
  auto& slot = locks_[child_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

void ModelStore::persist_unlocked(const UserModel& model) {
  if (model.child_id.empty()) throw std::invalid_argument("user model without child_id");
  std::ofstream out(path_for(model.child_id), std::ios::app);
  if (!out) throw StorageUnavailable("cannot open " + path_for(model.child_id).string());
  out << json{{"version", kModelRecordVersion}, {"model", to_json(model)}}.dump() << '\n';
  out.flush();
  if (!out) throw StorageUnavailable("write to " + path_for(model.child_id).string() + " failed");
}

UserModel ModelStore::load_unlocked(const std::string& child_id) {
  auto path = path_for(child_id);
  if (!std::filesystem::exists(path)) throw NotFound(child_id);
  std::ifstream in(path);
  if (!in) throw StorageUnavailable("cannot open " + path.string());
  std::optional<UserModel> last;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      json record = json::parse(line);
      if (record.at("version").get<int>() != kModelRecordVersion) continue;
      last = user_model_from_json(record.at("model"));
    } catch (const std::exception&) {
      // A torn trailing write leaves the previous record in force.
    }
  }
  if (!last) throw NotFound(child_id);
  return *last;
}

void ModelStore::persist(const UserModel& model) {
  std::lock_guard guard(lock_for(model.child_id));
  persist_unlocked(model);
}

UserModel ModelStore::load(const std::string& child_id) {
  std::lock_guard guard(lock_for(child_id));
  return load_unlocked(child_id);
}

bool ModelStore::exists(const std::string& child_id) {
  try {
    load(child_id);
    return true;
  } catch (const NotFound&) {
    return false;
  }
}

UserModel ModelStore::update(const std::string& child_id, const std::function<void(UserModel&)>& mutate) {
  std::lock_guard guard(lock_for(child_id));
  UserModel model;
  try {
    model = load_unlocked(child_id);
  } catch (const NotFound&) {
    model.child_id = child_id;
  }
  mutate(model);
  model.child_id = child_id;
  persist_unlocked(model);
  return model;
}

std::vector<std::string> ModelStore::children() const {
  std::vector<std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(directory_)) {
    if (entry.path().extension() == ".ndjson") out.push_back(id_from_stem(entry.path().stem().string()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ScriptLibrary::ScriptLibrary(std::vector<BehaviorScript> scripts, std::optional<std::filesystem::path> file)
    : file_(std::move(file)) {
  for (auto& s : scripts) {
    s.validate();
    scripts_[s.script_id] = std::move(s);
  }
}

ScriptLibrary ScriptLibrary::open(const std::filesystem::path& file, std::vector<BehaviorScript> seed) {
  if (std::filesystem::exists(file)) {
    std::ifstream in(file);
    if (!in) throw StorageUnavailable("cannot open " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    std::vector<BehaviorScript> scripts;
    try {
      for (const auto& j : json::parse(ss.str())) scripts.push_back(script_from_json(j));
    } catch (const json::exception& e) {
      throw StorageUnavailable("script library " + file.string() + " is corrupt: " + e.what());
    }
    return ScriptLibrary(std::move(scripts), file);
  }
  ScriptLibrary lib(std::move(seed), file);
  lib.save_unlocked();
  return lib;
}

std::vector<BehaviorScript> ScriptLibrary::list() const {
  std::shared_lock guard(mutex_);
  std::vector<BehaviorScript> out;
  out.reserve(scripts_.size());
  for (const auto& [id, s] : scripts_) out.push_back(s);
  return out;
}

std::optional<BehaviorScript> ScriptLibrary::get(const std::string& script_id) const {
  std::shared_lock guard(mutex_);
  auto it = scripts_.find(script_id);
  if (it == scripts_.end()) return std::nullopt;
  return it->second;
}

void ScriptLibrary::put(BehaviorScript script) {
  script.validate();
  std::unique_lock guard(mutex_);
  scripts_[script.script_id] = std::move(script);
  save_unlocked();
}

void ScriptLibrary::mark_used(const std::string& script_id, TimePoint ts) {
  std::unique_lock guard(mutex_);
  auto it = scripts_.find(script_id);
  if (it == scripts_.end()) throw NotFound(script_id);
  it->second.last_used = ts;
  save_unlocked();
}

void ScriptLibrary::save_unlocked() const {
  if (!file_) return;
  json arr = json::array();
  for (const auto& [id, s] : scripts_) arr.push_back(to_json(s));
  auto tmp = *file_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw StorageUnavailable("cannot write " + tmp.string());
    out << arr.dump(2) << '\n';
  }
  std::error_code ec;
  std::filesystem::rename(tmp, *file_, ec);
  if (ec) throw StorageUnavailable("cannot replace " + file_->string() + ": " + ec.message());
}

}  // namespace sar::user
