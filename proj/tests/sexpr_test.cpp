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

#include "forge/smtio/sexpr.hpp"

#include "doctest.h"
#include "forge/smtio/terms.hpp"
#include "test_support.hpp"

using namespace forge::smtio;

namespace {

SExpr A(const char* t) { return SExpr::atom(t); }

// Random trees over atoms that the printer must reproduce verbatim.
SExpr random_tree(std::mt19937& rng, int depth) {
  static const std::vector<std::string> atoms = {
      "p", "x", "and", "or", "not", "=>", "<=", "+", "-", "*", "0", "5", "42", "3.25",
      "#b1010", "#x1F", "true", "false", "|two words|", "\"str\"", "\"say \"\"hi\"\"\"",
      ":named", "Int", "Bool", "x!1", "a.b", "|a;b|", "\"\"", "|(|"};
  if (depth == 0 || rng() % 3 == 0) return SExpr::atom(atoms[rng() % atoms.size()]);
  SExpr::List kids;
  int n = static_cast<int>(rng() % 5);
  for (int i = 0; i < n; ++i) kids.push_back(random_tree(rng, depth - 1));
  return SExpr::list(std::move(kids));
}

int tree_depth(const SExpr& e) {
  if (e.is_atom()) return 0;
  int d = 0;
  for (const auto& c : e.children()) d = std::max(d, tree_depth(c));
  return d + 1;
}

}  // namespace

TEST_CASE("parsing nested lists") {
  auto v = parse_sexpr("(and p (not q))");
  REQUIRE(v.size() == 1);
  CHECK(v[0] == SExpr::list({A("and"), A("p"), SExpr::list({A("not"), A("q")})}));
}

TEST_CASE("model-shaped response") {
  auto v = parse_sexpr("((x 5))");
  REQUIRE(v.size() == 1);
  CHECK(v[0] == SExpr::list({SExpr::list({A("x"), A("5")})}));
}

TEST_CASE("unbalanced input reports the line of the open paren") {
  try {
    parse_sexpr("(assert");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::UnbalancedParen);
    CHECK(e.line() == 1);
  }
  try {
    parse_sexpr("(check-sat)\n\n(assert (> x 0)\n(check-sat)\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 1);
  }
  try {
    parse_sexpr("(a)\n  b)\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::UnbalancedParen);
    CHECK(e.line() == 2);
    CHECK(e.column() == 4);
  }
  try {
    parse_sexpr("(echo \"open)\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::UnterminatedString);
  }
}

TEST_CASE("comments, strings and quoted symbols do not affect nesting") {
  auto v = parse_sexpr("; (ignored\n(echo \"a ) b\") (f |x ) y|) ; tail (\n");
  REQUIRE(v.size() == 2);
  CHECK(v[0].children()[1].text() == "\"a ) b\"");
  CHECK(v[1].children()[1].text() == "|x ) y|");
}

TEST_CASE("printing") {
  CHECK(print_sexpr(SExpr::list({A("="), A("x"), A("5")})) == "(= x 5)");
  CHECK(print_sexpr(A("p")) == "p");
  CHECK(print_sexpr(SExpr::list({})) == "()");
  CHECK(print_sexpr(parse_one("  (a\n  (b   c)\n)")) == "(a (b c))");
}

TEST_CASE("parse of print is the identity on 1000 random trees of depth at most 8") {
  std::mt19937 rng(20260);
  for (int i = 0; i < 1000; ++i) {
    SExpr t = random_tree(rng, 8);
    REQUIRE(tree_depth(t) <= 8);
    std::string text = print_sexpr(t);
    auto back = parse_sexpr(text);
    REQUIRE(back.size() == 1);
    CHECK(back[0] == t);
    CHECK(print_sexpr(back[0]) == text);
  }
}

TEST_CASE("deep nesting does not exhaust the stack") {
  std::string text(100000, '(');
  text += std::string(100000, ')');
  auto v = parse_sexpr(text);
  REQUIRE(v.size() == 1);
  CHECK(print_sexpr(v[0]) == text);
}

TEST_CASE("framing complete solver responses") {
  CHECK(complete_form_length("sat\n") == 3);
  CHECK_FALSE(complete_form_length("sa").has_value());
  CHECK_FALSE(complete_form_length("((x 5)\n").has_value());
  CHECK(complete_form_length("((x 5))\nsat\n") == 7);
  CHECK(complete_form_length("  success\nsat") == 9);
}

TEST_CASE("free constants in first-occurrence order") {
  CHECK(free_constants(parse_one("(and (> x 5) (or p (= y x)))")) ==
        std::vector<std::string>{"x", "p", "y"});
  CHECK(free_constants(parse_one("(forall ((z Int)) (> z w))")) == std::vector<std::string>{"w"});
  CHECK(free_constants(parse_one("(let ((a 1)) (+ a b))")) == std::vector<std::string>{"b"});
  CHECK(free_constants(parse_one("(and true false)")).empty());
}
