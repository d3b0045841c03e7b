// Copyright 2026 The smt-forge Authors
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

#include "forge/cache.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>

#include "forge/sha256.hpp"
#include "json.hpp"

namespace forge::cache {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

bool is_hex_digest(std::string_view s) {
  if (s.size() != 64) return false;
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string temp_suffix() {
  static std::atomic<unsigned long> counter{0};
  return ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
}

void write_atomically(const fs::path& target, const std::string& bytes) {
  fs::path tmp = target;
  tmp += temp_suffix();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreUnwritable("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw StoreUnwritable("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw StoreUnwritable("cannot publish " + target.string() + ": " + ec.message());
  }
}

}  // namespace

CacheKey make_key(std::string_view code, std::string_view runtime_name,
                  std::string_view runtime_version) {
  std::string material;
  material.reserve(code.size() + runtime_name.size() + runtime_version.size() + 2);
  material.append(code);
  material.push_back('\0');
  material.append(runtime_name);
  material.push_back('\0');
  material.append(runtime_version);
  return CacheKey{sha256_hex(material)};
}

CorruptEntry::CorruptEntry(const CacheKey& key, const std::string& why)
    : std::runtime_error("corrupt cache entry " + key.digest + ": " + why), key_(key) {}

CacheStore::CacheStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec || !fs::is_directory(root_)) {
    throw StoreUnwritable("cannot create cache directory " + root_.string());
  }
  fs::path meta = root_ / kMetadataFile;
  json expected = {{"hash", std::string(kHashAlgorithm)}, {"format", kFormatVersion}};
  if (fs::exists(meta)) {
    std::ifstream in(meta);
    json current = json::parse(in, nullptr, false);
    if (current == expected) return;
    clear();
  }
  write_atomically(meta, expected.dump(2) + "\n");
}

fs::path CacheStore::entry_path(const CacheKey& key) const {
  return root_ / key.digest.substr(0, 2) / (key.digest + ".json");
}

std::optional<ExecutionResult> CacheStore::get(const CacheKey& key) const {
  fs::path path = entry_path(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();

  json doc = json::parse(buf.str(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw CorruptEntry(key, "unparseable JSON");
  try {
    ExecutionResult r;
    auto status = parse_run_status(doc.at("status").get<std::string>());
    if (!status) throw CorruptEntry(key, "unknown status");
    r.status = *status;
    r.output = doc.at("output").get<std::string>();
    r.diagnostics = doc.at("diagnostics").get<std::string>();
    r.elapsed_ms = doc.at("elapsedMs").get<long long>();
    r.runtime_name = doc.at("runtimeName").get<std::string>();
    r.runtime_version = doc.at("runtimeVersion").get<std::string>();
    doc.at("createdAt").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw CorruptEntry(key, e.what());
  }
}

void CacheStore::put(const CacheKey& key, const ExecutionResult& result) {
  fs::path path = entry_path(key);
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw StoreUnwritable("cannot create " + path.parent_path().string());
  json doc = {
      {"status", std::string(to_string(result.status))},
      {"output", result.output},
      {"diagnostics", result.diagnostics},
      {"elapsedMs", result.elapsed_ms},
      {"runtimeName", result.runtime_name},
      {"runtimeVersion", result.runtime_version},
      {"createdAt", utc_timestamp()},
  };
  write_atomically(path, doc.dump(2) + "\n");
}

std::size_t CacheStore::clear() {
  std::size_t removed = 0;
  std::error_code ec;
  if (!fs::is_directory(root_, ec)) return 0;
  for (const auto& shard : fs::directory_iterator(root_)) {
    if (!shard.is_directory() || shard.path().filename().string().size() != 2) continue;
    for (const auto& entry : fs::directory_iterator(shard.path())) {
      const auto name = entry.path().filename().string();
      bool counted = name.ends_with(".json") && is_hex_digest(name.substr(0, name.size() - 5));
      if (!fs::remove(entry.path(), ec) || ec) {
        throw StoreUnwritable("cannot remove " + entry.path().string());
      }
      if (counted) ++removed;
    }
    fs::remove(shard.path(), ec);
  }
  return removed;
}

}  // namespace forge::cache
