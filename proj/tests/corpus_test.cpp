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

#include "forge/corpus.hpp"

#include "doctest.h"
#include "test_support.hpp"

using namespace forge::corpus;
using forge::testing::TempDir;
using forge::testing::write_file;

TEST_CASE("first tokens") {
  CHECK(first_token("sat\n((x 1))\n") == "sat");
  CHECK(first_token("  \n unsat") == "unsat");
  CHECK(first_token("") == "");
}

TEST_CASE("validation reports each deviation") {
  TempDir dir("corpus");
  write_file(dir / "site/manifest.json", R"({"format": 1, "languages": {}, "snippets": {
    "a.md#0": {"label": "z3", "output": "unsat\n", "status": "success"},
    "a.md#1": {"label": "z3", "noBuild": true},
    "b.md#0": {"label": "z3", "output": "sat\n", "status": "success"}}})");
  write_file(dir / "fixtures.json", R"([
    {"path": "a.md", "expectedSnippetCount": 2, "expectedOutputs": {"a.md#0": "unsat"}},
    {"path": "b.md", "expectedSnippetCount": 1, "expectedOutputs": {"b.md#0": "sat"}}])");
  CHECK(validate_corpus(dir / "site", load_fixtures(dir / "fixtures.json")).empty());

  std::vector<CorpusFixture> wrong = {{"a.md", 3, {{"a.md#0", "sat"}, {"a.md#1", "sat"}}},
                                      {"c.md", 0, {{"c.md#0", "sat"}}}};
  auto d = validate_corpus(dir / "site", wrong);
  CHECK(d.size() == 4);

  CHECK(validate_corpus(dir / "nowhere", wrong).size() == 1);
}

TEST_CASE("shipped fixtures describe the shipped docs") {
  auto fixtures = load_fixtures(forge::testing::source_dir() / "docs/fixtures.json");
  for (const auto& f : fixtures) {
    CHECK(std::filesystem::exists(forge::testing::source_dir() / "docs" / f.path));
  }
  CHECK(fixtures.size() >= 4);
}
