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
#include <vector>

namespace forge::config {

/// How a language's snippets are executed at build time.
struct ExecutionPolicy {
  long long timeout_ms = 30000;
  /// Runner argv. Occurrences of `{timeoutMs}` in any argument are
  /// replaced with the policy timeout before the runner is spawned.
  std::vector<std::string> runner_command;
  std::vector<std::string> version_command;

  bool operator==(const ExecutionPolicy&) const = default;
};

struct LanguageConfig {
  std::string name;
  std::string label;
  std::string highlight;
  bool show_line_numbers = false;
  /// Absent: the language renders read-only and is never executed.
  std::optional<ExecutionPolicy> build_config;
  std::optional<std::string> discuss_url;

  bool read_only() const { return !build_config.has_value(); }
  bool operator==(const LanguageConfig&) const = default;
};

/// Immutable, ordered set of language configurations with unique labels.
class LanguageConfigSet {
 public:
  LanguageConfigSet() = default;
  /// Validates every invariant; throws ConfigError on violation.
  explicit LanguageConfigSet(std::vector<LanguageConfig> configs);

  const std::vector<LanguageConfig>& configs() const { return configs_; }
  std::size_t size() const { return configs_.size(); }
  bool empty() const { return configs_.empty(); }

  bool operator==(const LanguageConfigSet&) const = default;

 private:
  std::vector<LanguageConfig> configs_;
};

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { FileUnreadable, MalformedConfig, DuplicateLabel, InvalidPolicy };

  ConfigError(Kind kind, std::string detail);

  Kind kind() const { return kind_; }
  /// Position, label, or field name depending on kind.
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  std::string detail_;
};

bool is_valid_label(std::string_view label);

LanguageConfigSet load_config(const std::filesystem::path& path);
/// Same validation as load_config, over in-memory JSON text.
LanguageConfigSet parse_config(std::string_view json_text);

/// Exact, case-sensitive label match.
const LanguageConfig* lookup(const LanguageConfigSet& set, std::string_view label);

}  // namespace forge::config
