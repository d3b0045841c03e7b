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

#include "forge/sitebuild.hpp"

#include <mutex>

#include "doctest.h"
#include "forge/exec.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace forge;
using namespace forge::sitebuild;
using forge::testing::read_file;
using forge::testing::TempDir;
using forge::testing::write_file;

namespace {

// Three documents holding five executable snippets between them.
void write_small_corpus(const fs::path& docs) {
  write_file(docs / "a.md", "# A\n\n```z3\n(check-sat)\n```\n\n```z3\n(assert false)\n(check-sat)\n```\n");
  write_file(docs / "b.md", "# B\n\n```z3\n(declare-const p Bool)\n(assert p)\n(check-sat)\n```\n"
                            "\n```python\nprint('not run')\n```\n");
  write_file(docs / "sub/c.md", "# C\n\n```z3\n(echo \"hi\")\n```\n\n```z3\n(check-sat)\n(exit)\n```\n");
}

struct Fixture {
  TempDir dir{"site"};
  BuildOptions opts;
  std::vector<std::string> executed;
  std::mutex mutex;

  explicit Fixture(const std::string& version_command = "") {
    opts.docs_root = dir / "docs";
    opts.config_path = dir / "languages.json";
    opts.cache_dir = dir / "cache";
    opts.out_dir = dir / "out";
    opts.on_execute = [this](const mdscan::Snippet& s) {
      std::lock_guard lock(mutex);
      executed.push_back(s.id);
    };
    write_file(opts.config_path, forge::testing::solver_config_json(30000, version_command));
  }
};

}  // namespace

TEST_CASE("cold build, warm rebuild, and byte-identical output") {
  FORGE_REQUIRE_SOLVER();
  Fixture f;
  write_small_corpus(f.opts.docs_root);

  auto cold = build(f.opts);
  CHECK(cold.executed == 5);
  CHECK(cold.cached == 0);
  CHECK(cold.ok());
  CHECK(cold.pages == 3);
  CHECK(fs::exists(f.opts.out_dir / "a.html"));
  CHECK(fs::exists(f.opts.out_dir / "sub/c.html"));
  CHECK(fs::exists(f.opts.out_dir / "index.html"));
  CHECK(fs::exists(f.opts.out_dir / "assets/forge.css"));
  auto first = read_file(f.opts.out_dir / "manifest.json");
  auto first_page = read_file(f.opts.out_dir / "sub/c.html");

  f.executed.clear();
  auto warm = build(f.opts);
  CHECK(warm.executed == 0);
  CHECK(warm.cached == 5);
  CHECK(f.executed.empty());
  CHECK(read_file(f.opts.out_dir / "manifest.json") == first);
  CHECK(read_file(f.opts.out_dir / "sub/c.html") == first_page);
}

TEST_CASE("manifest contents") {
  FORGE_REQUIRE_SOLVER();
  Fixture f;
  write_small_corpus(f.opts.docs_root);
  build(f.opts);
  auto m = nlohmann::json::parse(read_file(f.opts.out_dir / "manifest.json"));
  CHECK(m["format"] == 1);
  CHECK(m["languages"]["z3"]["highlight"] == "clojure");
  CHECK(m["languages"]["z3"]["timeoutMs"] == 30000);
  CHECK(m["languages"]["python"]["readOnly"] == true);

  std::vector<std::string> ids;
  for (const auto& [id, e] : m["snippets"].items()) ids.push_back(id);
  CHECK(ids == std::vector<std::string>{"a.md#0", "a.md#1", "b.md#0", "b.md#1", "sub/c.md#0",
                                        "sub/c.md#1"});
  CHECK(m["snippets"]["a.md#0"]["output"] == "sat\n");
  CHECK(m["snippets"]["a.md#1"]["output"] == "unsat\n");
  CHECK(m["snippets"]["a.md#0"]["status"] == "success");
  CHECK(m["snippets"]["a.md#0"]["page"] == "a.html");
  CHECK(m["snippets"]["b.md#1"]["readOnly"] == true);
  CHECK_FALSE(m["snippets"]["b.md#1"].contains("output"));
  CHECK(m["snippets"]["sub/c.md#0"]["output"] == "hi\n");
}

TEST_CASE("emit_manifest orders entries by path and numeric index") {
  auto langs = config::parse_config(R"([{"name": "Z3", "label": "z3", "highlight": "clojure",
    "buildConfig": {"timeoutMs": 10, "runnerCommand": ["z3"], "versionCommand": ["z3"]}}])");
  std::vector<mdscan::Snippet> snippets;
  for (int i : {10, 2, 1}) {
    snippets.push_back({"a.md#" + std::to_string(i), "z3", {}, "(check-sat)\n", {"a.md", i}});
  }
  std::map<std::string, ExecutionResult> results{
      {"a.md#1", {RunStatus::Success, "sat\n", "", 1, "Z3", "1"}},
      {"a.md#2", {RunStatus::Success, "unsat\n", "", 1, "Z3", "1"}}};
  auto m = nlohmann::ordered_json::parse(emit_manifest(snippets, results, langs));
  std::vector<std::string> ids;
  for (const auto& [id, e] : m["snippets"].items()) ids.push_back(id);
  CHECK(ids == std::vector<std::string>{"a.md#1", "a.md#2", "a.md#10"});
  CHECK(m["snippets"]["a.md#1"]["output"] == "sat\n");
  CHECK(m["snippets"]["a.md#2"]["output"] == "unsat\n");
  CHECK_FALSE(m["snippets"]["a.md#10"].contains("output"));
  CHECK(emit_manifest(snippets, results, langs) == emit_manifest(snippets, results, langs));
}

TEST_CASE("editing one snippet re-executes exactly that snippet") {
  FORGE_REQUIRE_SOLVER();
  Fixture f;
  write_small_corpus(f.opts.docs_root);
  build(f.opts);
  write_file(f.opts.docs_root / "a.md",
             "# A\n\n```z3\n(check-sat)\n(check-sat)\n```\n\n```z3\n(assert false)\n(check-sat)\n```\n");
  f.executed.clear();
  auto r = build(f.opts);
  CHECK(r.executed == 1);
  CHECK(r.cached == 4);
  CHECK(f.executed == std::vector<std::string>{"a.md#0"});
}

TEST_CASE("a new runtime version re-executes everything") {
  FORGE_REQUIRE_SOLVER();
  TempDir vdir("version");
  write_file(vdir / "version.txt", "Z3 version 4.0.0\n");
  Fixture f("[\"cat\", \"" + (vdir / "version.txt").string() + "\"]");
  write_small_corpus(f.opts.docs_root);
  CHECK(build(f.opts).executed == 5);
  CHECK(build(f.opts).executed == 0);
  write_file(vdir / "version.txt", "Z3 version 4.0.1\n");
  auto r = build(f.opts);
  CHECK(r.executed == 5);
  CHECK(r.cached == 0);
}

TEST_CASE("an erroneous snippet fails the build and leaves the old bundle alone") {
  FORGE_REQUIRE_SOLVER();
  Fixture f;
  write_small_corpus(f.opts.docs_root);
  build(f.opts);
  auto before = read_file(f.opts.out_dir / "manifest.json");

  write_file(f.opts.docs_root / "bad.md", "# Bad\n\n```z3\n(assert\n```\n");
  try {
    build(f.opts);
    FAIL("expected BuildFailed");
  } catch (const BuildFailed& e) {
    REQUIRE(e.report().failures.size() == 1);
    const auto& fail = e.report().failures[0];
    CHECK(fail.snippet_id == "bad.md#0");
    CHECK(fail.location.line == 3);
    CHECK(fail.diagnostics.find("error") != std::string::npos);
    CHECK(format_report(e.report()).find("bad.md#0") != std::string::npos);
  }
  CHECK(read_file(f.opts.out_dir / "manifest.json") == before);
  CHECK_FALSE(fs::exists(f.opts.out_dir / "bad.html"));

  auto report = check(f.opts);
  CHECK_FALSE(report.ok());
}

TEST_CASE("no-build snippets are skipped and never executed") {
  FORGE_REQUIRE_SOLVER();
  Fixture f;
  write_small_corpus(f.opts.docs_root);
  write_file(f.opts.docs_root / "bad.md", "# Bad\n\n```z3 no-build\n(assert\n```\n");
  auto r = check(f.opts);
  CHECK(r.ok());
  CHECK(r.skipped_no_build == 1);
  CHECK(std::find(f.executed.begin(), f.executed.end(), "bad.md#0") == f.executed.end());
  CHECK_FALSE(fs::exists(f.opts.out_dir));

  build(f.opts);
  auto m = nlohmann::json::parse(read_file(f.opts.out_dir / "manifest.json"));
  CHECK(m["snippets"]["bad.md#0"]["noBuild"] == true);
  CHECK_FALSE(m["snippets"]["bad.md#0"].contains("status"));
}

TEST_CASE("timeouts fail the build and are not cached") {
  Fixture f;
  write_file(f.opts.config_path, R"([{"name": "Sleepy", "label": "sleepy", "highlight": "text",
    "buildConfig": {"timeoutMs": 200, "runnerCommand": ["sh"], "versionCommand": ["echo", "1"]}}])");
  write_file(f.opts.docs_root / "s.md", "```sleepy\nsleep 5\n```\n");
  auto r = check(f.opts);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].status == RunStatus::Timeout);
  f.executed.clear();
  CHECK(check(f.opts).executed == 1);
}

TEST_CASE("input and content errors") {
  Fixture f;
  f.opts.docs_root = f.dir / "missing";
  CHECK_THROWS_AS(check(f.opts), InputError);

  Fixture g;
  write_file(g.opts.docs_root / "a.md", "```z3 nobuild\n(check-sat)\n```\n");
  CHECK_THROWS_WITH_AS(check(g.opts), doctest::Contains("a.md:1"), ContentError);

  Fixture h;
  write_file(h.opts.docs_root / "a.md", "# ok\n");
  write_file(h.opts.docs_root / "bad.game.json", "{}");
  CHECK_THROWS_AS(check(h.opts), ContentError);

  Fixture k;
  write_file(k.opts.config_path, R"([{"name": "Gone", "label": "gone", "highlight": "x",
    "buildConfig": {"timeoutMs": 10, "runnerCommand": ["/nonexistent/gone"],
                    "versionCommand": ["/nonexistent/gone", "--version"]}}])");
  write_file(k.opts.docs_root / "a.md", "```gone\nx\n```\n");
  CHECK_THROWS_AS(check(k.opts), exec::RuntimeUnavailable);

  Fixture m;
  write_file(m.opts.config_path, "[{");
  write_file(m.opts.docs_root / "a.md", "# ok\n");
  CHECK_THROWS_AS(check(m.opts), config::ConfigError);
}

TEST_CASE("games are emitted with their secret encoded") {
  Fixture f;
  write_file(f.opts.docs_root / "a.md", "# Only prose\n");
  write_file(f.opts.docs_root / "games/t.game.json",
             R"j({"id": "t", "title": "T", "description": "D",
                 "declarations": [{"name": "x", "sort": "Int"}], "secret": "(> x 5)"})j");
  build(f.opts);
  auto g = nlohmann::json::parse(read_file(f.opts.out_dir / "games/t.json"));
  CHECK(g["secretEncoded"] == "KD4geCA1KQ==");
  CHECK_FALSE(g.contains("secret"));
  CHECK(g["maxRows"] == 4);
  auto index = nlohmann::json::parse(read_file(f.opts.out_dir / "games/index.json"));
  REQUIRE(index.size() == 1);
  CHECK(index[0]["path"] == "games/t.json");
}

TEST_CASE("pages carry the block attributes the front end reads") {
  FORGE_REQUIRE_SOLVER();
  Fixture f;
  write_file(f.opts.docs_root / "playground/p.md", "# P\n\n```z3\n(check-sat)\n```\n");
  write_file(f.opts.docs_root / "x.md", "# X\n\n```z3 no-build\n(assert\n```\n\n```python\n1 < 2\n```\n");
  build(f.opts);
  auto page = read_file(f.opts.out_dir / "playground/p.html");
  CHECK(page.find("data-snippet-id=\"playground/p.md#0\"") != std::string::npos);
  CHECK(page.find("data-always-editable=\"true\"") != std::string::npos);
  CHECK(page.find("data-discuss-url=\"https://github.com/Z3Prover/z3/discussions\"") !=
        std::string::npos);
  CHECK(page.find("<pre class=\"forge-output\" data-status=\"success\">sat\n</pre>") !=
        std::string::npos);
  CHECK(page.find("href=\"../assets/forge.css\"") != std::string::npos);
  auto x = read_file(f.opts.out_dir / "x.html");
  CHECK(x.find("data-no-build=\"true\"") != std::string::npos);
  CHECK(x.find("data-read-only=\"true\"") != std::string::npos);
  CHECK(x.find("1 &lt; 2") != std::string::npos);
  CHECK(x.find("forge-output") == std::string::npos);
}

TEST_CASE("parallel builds match serial builds") {
  FORGE_REQUIRE_SOLVER();
  Fixture serial, parallel;
  write_small_corpus(serial.opts.docs_root);
  write_small_corpus(parallel.opts.docs_root);
  serial.opts.jobs = 1;
  parallel.opts.jobs = 4;
  build(serial.opts);
  build(parallel.opts);
  CHECK(read_file(serial.opts.out_dir / "manifest.json") ==
        read_file(parallel.opts.out_dir / "manifest.json"));
}
