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

#include "forge/exec.hpp"

#include "doctest.h"
#include "test_support.hpp"

using namespace forge;
using namespace forge::exec;
using config::ExecutionPolicy;

namespace {

ExecutionPolicy sh_policy(const std::string& script, long long timeout_ms = 30000) {
  return {timeout_ms, {"sh", "-c", script}, {"echo", "sh 1"}};
}

ExecutionPolicy solver_policy() {
  return {30000, forge::testing::solver_command(), {*forge::testing::solver_path(), "--version"}};
}

}  // namespace

TEST_CASE("version probe records the first line") {
  CHECK(probe_runtime_version({1000, {"x"}, {"printf", "Z3 version 4.12.2 - 64 bit\nextra\n"}}) ==
        "Z3 version 4.12.2 - 64 bit");
  CHECK(probe_runtime_version({1000, {"x"}, {"printf", "\n  v1.0  \n"}}) == "v1.0");
}

TEST_CASE("version probe failures") {
  CHECK_THROWS_AS(probe_runtime_version({1000, {"x"}, {"/nonexistent/solver", "--version"}}),
                  RuntimeUnavailable);
  CHECK_THROWS_AS(probe_runtime_version({1000, {"x"}, {"sh", "-c", "exit 4"}}), RuntimeUnavailable);
  CHECK_THROWS_AS(probe_runtime_version({1000, {"x"}, {"true"}}), EmptyVersion);
}

TEST_CASE("the reference solver reports a version") {
  FORGE_REQUIRE_SOLVER();
  auto v = probe_runtime_version(solver_policy());
  CHECK(v.find("Z3 version") == 0);
}

TEST_CASE("snippets run on the reference solver") {
  FORGE_REQUIRE_SOLVER();
  Runtime rt{"Z3", probe_runtime_version(solver_policy())};
  auto r = run_code("(declare-const p Bool)(assert p)(check-sat)", solver_policy(), rt);
  CHECK(r.status == RunStatus::Success);
  CHECK(r.output == "sat\n");
  CHECK(r.runtime_name == "Z3");
  CHECK(r.runtime_version == rt.version);

  auto socrates = run_code(
      "(declare-sort Object 0)\n(declare-fun human (Object) Bool)\n"
      "(declare-fun mortal (Object) Bool)\n(declare-const Socrates Object)\n"
      "(assert (forall ((x Object)) (=> (human x) (mortal x))))\n"
      "(assert (human Socrates))\n(assert (not (mortal Socrates)))\n(check-sat)\n",
      solver_policy(), rt);
  CHECK(socrates.status == RunStatus::Success);
  CHECK(socrates.output == "unsat\n");

  auto bad = run_code("(assert (> 1 0)\n", solver_policy(), rt);
  CHECK(bad.status == RunStatus::Error);
  CHECK(bad.diagnostics.find("error") != std::string::npos);
}

TEST_CASE("a runner sleeping past its budget times out") {
  Runtime rt{"sh", "1"};
  auto r = run_code("", sh_policy("sleep 10", 1000), rt);
  CHECK(r.status == RunStatus::Timeout);
  CHECK(r.elapsed_ms >= 1000);
  CHECK(r.elapsed_ms <= 1000 + kGrace.count());
}

TEST_CASE("a runner ignoring polite termination still returns within the grace window") {
  Runtime rt{"sh", "1"};
  auto r = run_code("", sh_policy("trap '' TERM; sleep 10", 500), rt);
  CHECK(r.status == RunStatus::Timeout);
  CHECK(r.elapsed_ms <= 500 + kGrace.count());
}

TEST_CASE("the runner sees the code on stdin and the timeout in its environment") {
  Runtime rt{"sh", "1"};
  auto r = run_code("abc", sh_policy("cat; printf ' %s' \"$SMT_FORGE_TIMEOUT_MS\"", 1234), rt);
  CHECK(r.output == "abc 1234");
  ExecutionPolicy templated{777, {"echo", "{timeoutMs}"}, {"echo", "1"}};
  CHECK(run_code("", templated, rt).output == "777\n");
}

TEST_CASE("nonzero exit is an error and diagnostics fall back to stdout") {
  Runtime rt{"sh", "1"};
  auto r = run_code("", sh_policy("echo out; echo err >&2; exit 2"), rt);
  CHECK(r.status == RunStatus::Error);
  CHECK(r.diagnostics == "err\n");
  auto s = run_code("", sh_policy("echo '(error \"x\")'; exit 1"), rt);
  CHECK(s.diagnostics == "(error \"x\")\n");
}

TEST_CASE("a runner that cannot be started is an unavailable runtime") {
  Runtime rt{"none", "0"};
  CHECK_THROWS_AS(run_code("", {1000, {"/nonexistent/runner"}, {"echo"}}, rt), RuntimeUnavailable);
}

TEST_CASE("oversized output is truncated on a character boundary") {
  Runtime rt{"sh", "1"};
  // 40000 two-byte characters: 80000 bytes, cut must not split one.
  auto r = run_code("", sh_policy("i=0; while [ $i -lt 40000 ]; do printf 'é'; i=$((i+1)); done"),
                    rt);
  CHECK(r.status == RunStatus::Success);
  REQUIRE(r.output.ends_with(kTruncationMarker));
  std::string body = r.output.substr(0, r.output.size() - kTruncationMarker.size());
  CHECK(body.size() <= kMaxOutputBytes);
  CHECK(body.size() % 2 == 0);
}

TEST_CASE("deterministic runners give identical results") {
  Runtime rt{"sh", "1"};
  auto a = run_code("x", sh_policy("cat; echo y"), rt);
  auto b = run_code("x", sh_policy("cat; echo y"), rt);
  CHECK(a.status == b.status);
  CHECK(a.output == b.output);
}

TEST_CASE("run_snippet runs the snippet's code") {
  Runtime rt{"sh", "1"};
  mdscan::Snippet s{"a.md#0", "sh", {}, "echo from-snippet\n", {"a.md", 1}};
  CHECK(run_snippet(s, sh_policy("sh"), rt).output == "from-snippet\n");
}
