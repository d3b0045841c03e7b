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

#include "doctest.h"
#include "test_support.hpp"

using namespace forge::config;
using forge::testing::TempDir;
using forge::testing::write_file;

namespace {

const char* kZ3 = R"([{
  "name": "Z3", "label": "z3", "highlight": "clojure", "showLineNumbers": true,
  "buildConfig": {"timeoutMs": 30000, "runnerCommand": ["z3", "-in"],
                  "versionCommand": ["z3", "--version"]}
}])";

ConfigError::Kind kind_of(const std::string& json) {
  try {
    parse_config(json);
  } catch (const ConfigError& e) {
    return e.kind();
  }
  FAIL("expected ConfigError for " << json);
  return ConfigError::Kind::MalformedConfig;
}

}  // namespace

TEST_CASE("a single solver language loads with its listed settings") {
  TempDir dir("config");
  write_file(dir / "languages.json", kZ3);
  auto set = load_config(dir / "languages.json");
  REQUIRE(set.size() == 1);
  const auto& z3 = set.configs()[0];
  CHECK(z3.name == "Z3");
  CHECK(z3.label == "z3");
  CHECK(z3.highlight == "clojure");
  CHECK(z3.show_line_numbers);
  REQUIRE(z3.build_config);
  CHECK(z3.build_config->timeout_ms == 30000);
  CHECK(z3.build_config->runner_command == std::vector<std::string>{"z3", "-in"});
  CHECK_FALSE(z3.read_only());
}

TEST_CASE("an empty list is a valid empty set") {
  auto set = parse_config("[]");
  CHECK(set.empty());
  CHECK(lookup(set, "z3") == nullptr);
}

TEST_CASE("duplicate labels are rejected") {
  std::string two = R"([{"name": "A", "label": "z3", "highlight": "x"},
                        {"name": "B", "label": "z3", "highlight": "y"}])";
  try {
    parse_config(two);
    FAIL("expected DuplicateLabel");
  } catch (const ConfigError& e) {
    CHECK(e.kind() == ConfigError::Kind::DuplicateLabel);
    CHECK(e.detail() == "z3");
  }
}

TEST_CASE("lookup is exact and case-sensitive") {
  auto set = parse_config(kZ3);
  REQUIRE(lookup(set, "z3") != nullptr);
  CHECK(lookup(set, "z3")->name == "Z3");
  CHECK(lookup(set, "Z3") == nullptr);
  CHECK(lookup(set, "z") == nullptr);
}

TEST_CASE("a dafny language can be added next to z3") {
  auto set = parse_config(R"([
    {"name": "Z3", "label": "z3", "highlight": "clojure"},
    {"name": "Dafny", "label": "dafny", "highlight": "dafny",
     "buildConfig": {"timeoutMs": 60000, "runnerCommand": ["dafny", "run", "--stdin"],
                     "versionCommand": ["dafny", "--version"]}}])");
  const auto* dafny = lookup(set, "dafny");
  REQUIRE(dafny != nullptr);
  CHECK(dafny->name == "Dafny");
  CHECK(dafny->build_config->timeout_ms == 60000);
}

TEST_CASE("a language without buildConfig is read-only") {
  auto set = parse_config(R"([{"name": "Python", "label": "python", "highlight": "python"}])");
  CHECK(lookup(set, "python")->read_only());
  CHECK_FALSE(lookup(set, "python")->show_line_numbers);
}

TEST_CASE("malformed inputs map to the documented error kinds") {
  CHECK(kind_of("{") == ConfigError::Kind::MalformedConfig);
  CHECK(kind_of("{}") == ConfigError::Kind::MalformedConfig);
  CHECK(kind_of(R"([{"label": "z3", "highlight": "x"}])") == ConfigError::Kind::MalformedConfig);
  CHECK(kind_of(R"([{"name": "A", "label": "Z3", "highlight": "x"}])") ==
        ConfigError::Kind::MalformedConfig);
  CHECK(kind_of(R"([{"name": "A", "label": "a", "highlight": "x", "colour": 1}])") ==
        ConfigError::Kind::MalformedConfig);
  CHECK(kind_of(R"([{"name": "A", "label": "a", "highlight": "x", "discussUrl": "forum"}])") ==
        ConfigError::Kind::MalformedConfig);
  CHECK(kind_of(R"([{"name": "A", "label": "a", "highlight": "x",
                     "buildConfig": {"timeoutMs": 0, "runnerCommand": ["a"],
                                     "versionCommand": ["a"]}}])") ==
        ConfigError::Kind::InvalidPolicy);
  CHECK(kind_of(R"([{"name": "A", "label": "a", "highlight": "x",
                     "buildConfig": {"timeoutMs": 10, "runnerCommand": [],
                                     "versionCommand": ["a"]}}])") ==
        ConfigError::Kind::InvalidPolicy);
}

TEST_CASE("unreadable paths are reported as such") {
  TempDir dir("config");
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  try {
    load_config(dir.path());
    FAIL("a directory is not a config file");
  } catch (const ConfigError& e) {
    CHECK(e.kind() == ConfigError::Kind::FileUnreadable);
  }
}

TEST_CASE("loading is deterministic and every label round-trips through lookup") {
  std::mt19937 rng(7);
  for (int round = 0; round < 50; ++round) {
    std::string json = "[";
    int n = static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      if (i) json += ",";
      bool runs = rng() % 2;
      json += R"({"name": "L)" + std::to_string(i) + R"(", "label": "lang-)" + std::to_string(i) +
              R"(", "highlight": "h", "showLineNumbers": )" + (rng() % 2 ? "true" : "false");
      if (runs) {
        json += R"(, "buildConfig": {"timeoutMs": )" + std::to_string(1 + rng() % 100000) +
                R"(, "runnerCommand": ["r"], "versionCommand": ["v", "--version"]})";
      }
      json += "}";
    }
    json += "]";
    auto a = parse_config(json);
    auto b = parse_config(json);
    CHECK(a == b);
    for (const auto& c : a.configs()) {
      REQUIRE(lookup(a, c.label) != nullptr);
      CHECK(*lookup(a, c.label) == c);
    }
  }
}
