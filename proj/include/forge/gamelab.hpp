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
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "forge/smtio/session.hpp"

namespace forge::gamelab {

using smtio::Model;
using smtio::SExpr;
using smtio::Session;

/// Sorts a game may declare: Boolean cores, linear integer and linear real
/// arithmetic.
enum class Sort { Bool, Int, Real };

std::string_view sort_name(Sort sort);

struct Declaration {
  std::string name;
  Sort sort = Sort::Bool;

  bool operator==(const Declaration&) const = default;
};

inline constexpr int kDefaultMaxRows = 4;

struct GameSpec {
  std::string id;
  std::string title;
  std::string description;
  std::vector<Declaration> declarations;
  SExpr secret;
  std::string secret_text;  // as written in the spec file
  int max_rows = kDefaultMaxRows;
};

class MalformedGame : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormulaParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The formula is ill-sorted or uses something outside the supported logics.
/// `constant()` names the offending constant when there is one, otherwise
/// the offending subterm.
class SortError : public std::runtime_error {
 public:
  SortError(std::string constant, const std::string& why)
      : std::runtime_error(why), constant_(std::move(constant)) {}
  const std::string& constant() const { return constant_; }

 private:
  std::string constant_;
};

/// The solver answered unknown where a definite verdict was needed.
class SolverUnknown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a game spec and checks everything that does not need a solver:
/// field types, declarations, the secret's sort and logic.
GameSpec parse_game(std::string_view json_text);
GameSpec load_game(const std::filesystem::path& path);
/// load_game plus a satisfiability check of the secret.
GameSpec load_game(const std::filesystem::path& path, Session& session);
/// Throws MalformedGame when the secret is unsatisfiable.
void check_secret_satisfiable(const GameSpec& game, Session& session);

/// Sort of `term` over `decls`, restricted to the supported logics.
Sort check_sort(const SExpr& term, const std::vector<Declaration>& decls);

/// Accepts a bare term, or one or more (assert F) commands whose formulas
/// are conjoined. Throws FormulaParseError.
SExpr parse_user_formula(std::string_view text);

struct Enumeration {
  std::vector<Model> models;
  /// False when the solver answered unknown before enumeration finished.
  bool complete = true;
};

/// Up to k pairwise-distinct models of `formula`, projected onto
/// `declarations`, by iterated check-sat and blocking clauses. Constants the
/// session does not know yet are declared for the duration of the call.
Enumeration enumerate_models(const SExpr& formula, const std::vector<Declaration>& declarations,
                             int k, Session& session);

struct ModelRow {
  Model model;
  bool satisfies_user = false;
  bool satisfies_secret = false;

  bool distinguishing() const { return satisfies_user != satisfies_secret; }
};

struct Verdict {
  enum class Kind { Equivalent, Mismatch };

  Kind kind = Kind::Equivalent;
  std::vector<ModelRow> rows;  // empty iff Equivalent

  bool equivalent() const { return kind == Kind::Equivalent; }
};

/// Decides whether `user` is equivalent to the game's secret. A mismatch
/// lists distinguishing models first (user but not secret, then secret but
/// not user), then further models of the user formula, up to max_rows.
/// Runs inside its own frame; the session must not already declare the
/// game's constants.
Verdict judge(const SExpr& user, const GameSpec& game, Session& session);

/// Aligned text table with the columns of the game page.
std::string format_verdict(const Verdict& verdict);

}  // namespace forge::gamelab
