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

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "forge/exec_result.hpp"

namespace forge::cache {

/// Lowercase hex SHA-256 over code || 0x00 || runtime name || 0x00 || version.
struct CacheKey {
  std::string digest;

  bool operator==(const CacheKey&) const = default;
  auto operator<=>(const CacheKey&) const = default;
};

CacheKey make_key(std::string_view code, std::string_view runtime_name,
                  std::string_view runtime_version);

class CorruptEntry : public std::runtime_error {
 public:
  CorruptEntry(const CacheKey& key, const std::string& why);
  const CacheKey& key() const { return key_; }

 private:
  CacheKey key_;
};

class StoreUnwritable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// On-disk store: one JSON file per entry at `<root>/<2 hex>/<digest>.json`.
/// Writes go through a temporary file and rename(2), so readers see either
/// nothing or a complete entry. Safe for concurrent readers and writers.
class CacheStore {
 public:
  /// Creates the root if needed. A metadata file records the hash
  /// algorithm; a store written with another algorithm is emptied.
  explicit CacheStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  std::optional<ExecutionResult> get(const CacheKey& key) const;
  void put(const CacheKey& key, const ExecutionResult& result);
  std::size_t clear();

  std::filesystem::path entry_path(const CacheKey& key) const;

 private:
  std::filesystem::path root_;
};

inline constexpr std::string_view kMetadataFile = "store.json";

}  // namespace forge::cache
