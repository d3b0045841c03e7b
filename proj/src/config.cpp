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

#include "forge/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace forge::config {

namespace {

using nlohmann::json;

const char* kind_name(ConfigError::Kind kind) {
  switch (kind) {
    case ConfigError::Kind::FileUnreadable: return "file unreadable";
    case ConfigError::Kind::MalformedConfig: return "malformed config";
    case ConfigError::Kind::DuplicateLabel: return "duplicate label";
    case ConfigError::Kind::InvalidPolicy: return "invalid policy";
  }
  return "config error";
}

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw ConfigError(ConfigError::Kind::MalformedConfig, where + ": " + what);
}

[[noreturn]] void bad_policy(const std::string& field, const std::string& what) {
  throw ConfigError(ConfigError::Kind::InvalidPolicy, field + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) malformed(where + "/" + key, "unknown key");
  }
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(where + "/" + key, "missing required field");
  if (!it->is_string()) malformed(where + "/" + key, "expected a string");
  return it->get<std::string>();
}

std::vector<std::string> command_field(const json& obj, const char* key,
                                       const std::string& where) {
  std::string field = where + "/" + key;
  auto it = obj.find(key);
  if (it == obj.end()) bad_policy(field, "missing");
  if (!it->is_array() || it->empty()) bad_policy(field, "expected a non-empty array of strings");
  std::vector<std::string> argv;
  for (const auto& arg : *it) {
    if (!arg.is_string()) bad_policy(field, "expected a non-empty array of strings");
    argv.push_back(arg.get<std::string>());
  }
  if (argv.front().empty()) bad_policy(field, "program name is empty");
  return argv;
}

ExecutionPolicy parse_policy(const json& obj, const std::string& where) {
  if (!obj.is_object()) bad_policy(where, "expected an object");
  reject_unknown_keys(obj, {"timeoutMs", "runnerCommand", "versionCommand"}, where);
  ExecutionPolicy policy;
  auto t = obj.find("timeoutMs");
  if (t == obj.end()) bad_policy(where + "/timeoutMs", "missing");
  if (!t->is_number_integer() || t->get<long long>() <= 0) {
    bad_policy(where + "/timeoutMs", "must be a positive integer");
  }
  policy.timeout_ms = t->get<long long>();
  policy.runner_command = command_field(obj, "runnerCommand", where);
  policy.version_command = command_field(obj, "versionCommand", where);
  return policy;
}

LanguageConfig parse_language(const json& obj, const std::string& where) {
  if (!obj.is_object()) malformed(where, "expected a language object");
  reject_unknown_keys(obj,
                      {"name", "label", "highlight", "showLineNumbers", "buildConfig",
                       "discussUrl"},
                      where);
  LanguageConfig c;
  c.name = require_string(obj, "name", where);
  c.label = require_string(obj, "label", where);
  c.highlight = require_string(obj, "highlight", where);
  if (c.name.empty()) malformed(where + "/name", "must not be empty");
  if (!is_valid_label(c.label)) malformed(where + "/label", "must match [a-z0-9_-]+");

  if (auto it = obj.find("showLineNumbers"); it != obj.end()) {
    if (!it->is_boolean()) malformed(where + "/showLineNumbers", "expected a boolean");
    c.show_line_numbers = it->get<bool>();
  }
  if (auto it = obj.find("buildConfig"); it != obj.end() && !it->is_null()) {
    c.build_config = parse_policy(*it, where + "/buildConfig");
  }
  if (auto it = obj.find("discussUrl"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) malformed(where + "/discussUrl", "expected a string");
    std::string url = it->get<std::string>();
    if (!url.starts_with("https://") && !url.starts_with("http://")) {
      malformed(where + "/discussUrl", "must be an absolute http(s) URL");
    }
    c.discuss_url = std::move(url);
  }
  return c;
}

}  // namespace

ConfigError::ConfigError(Kind kind, std::string detail)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + detail),
      kind_(kind),
      detail_(std::move(detail)) {}

bool is_valid_label(std::string_view label) {
  if (label.empty()) return false;
  for (char ch : label) {
    bool ok = (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_' || ch == '-';
    if (!ok) return false;
  }
  return true;
}

LanguageConfigSet::LanguageConfigSet(std::vector<LanguageConfig> configs)
    : configs_(std::move(configs)) {
  std::set<std::string_view> seen;
  for (const auto& c : configs_) {
    if (!is_valid_label(c.label)) {
      throw ConfigError(ConfigError::Kind::MalformedConfig, "invalid label '" + c.label + "'");
    }
    if (!seen.insert(c.label).second) {
      throw ConfigError(ConfigError::Kind::DuplicateLabel, c.label);
    }
    if (c.build_config) {
      const auto& p = *c.build_config;
      if (p.timeout_ms <= 0) throw ConfigError(ConfigError::Kind::InvalidPolicy, "timeoutMs");
      if (p.runner_command.empty() || p.runner_command.front().empty()) {
        throw ConfigError(ConfigError::Kind::InvalidPolicy, "runnerCommand");
      }
      if (p.version_command.empty() || p.version_command.front().empty()) {
        throw ConfigError(ConfigError::Kind::InvalidPolicy, "versionCommand");
      }
    }
  }
}

LanguageConfigSet parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(ConfigError::Kind::MalformedConfig,
                      "byte " + std::to_string(e.byte) + ": invalid JSON");
  }
  if (!doc.is_array()) malformed("/", "top level must be an array of language objects");

  std::vector<LanguageConfig> configs;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    configs.push_back(parse_language(doc[i], "/" + std::to_string(i)));
  }
  return LanguageConfigSet(std::move(configs));
}

LanguageConfigSet load_config(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) {
    throw ConfigError(ConfigError::Kind::FileUnreadable, path.string() + " is a directory");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(ConfigError::Kind::FileUnreadable, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ConfigError(ConfigError::Kind::FileUnreadable, path.string());
  return parse_config(buf.str());
}

const LanguageConfig* lookup(const LanguageConfigSet& set, std::string_view label) {
  for (const auto& c : set.configs()) {
    if (c.label == label) return &c;
  }
  return nullptr;
}

}  // namespace forge::config
