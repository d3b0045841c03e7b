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

#include <chrono>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "forge/process.hpp"
#include "forge/smtio/sexpr.hpp"

namespace forge::smtio {

enum class SatResult { Sat, Unsat, Unknown };

std::string_view to_string(SatResult r);

/// Values for declared constants, in declaration order.
struct Model {
  std::vector<std::pair<std::string, SExpr>> bindings;
  std::map<std::string, std::string> sorts;

  const SExpr* value(std::string_view name) const;
  bool empty() const { return bindings.empty(); }
  /// "x = 5, y = (- 2)"
  std::string str() const;

  bool operator==(const Model&) const = default;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The solver did not answer within the session budget; the session is dead.
class SolverTimeout : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A query that needed a definite answer got `unknown`.
class UnknownResult : public SolverError {
 public:
  using SolverError::SolverError;
};

class NoModelAvailable : public std::logic_error {
 public:
  NoModelAvailable() : std::logic_error("no model available: last check-sat was not sat") {}
};

class IncompleteModel : public std::invalid_argument {
 public:
  explicit IncompleteModel(std::string constant)
      : std::invalid_argument("model does not bind '" + constant + "'"),
        constant_(std::move(constant)) {}
  const std::string& constant() const { return constant_; }

 private:
  std::string constant_;
};

class EmptyModel : public std::invalid_argument {
 public:
  EmptyModel() : std::invalid_argument("cannot block an empty model") {}
};

struct SessionOptions {
  /// Solver argv; the solver must read SMT-LIB v2 commands on stdin
  /// (for z3: {"z3", "-in"}).
  std::vector<std::string> command;
  /// Per-query solver budget, passed to the solver as :timeout.
  std::chrono::milliseconds query_budget{10000};
  /// Extra wall-clock allowance before a silent solver is declared hung.
  std::chrono::milliseconds grace{2000};
};

/// One long-lived interactive solver process in incremental mode.
///
/// Every check_sat runs inside its own push/pop frame, which stays open so
/// that get_model can inspect it; the frame is popped by the next command
/// that changes solver state. Not thread-safe: one client per session.
class Session {
 public:
  explicit Session(SessionOptions options);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  void declare_const(const std::string& name, const std::string& sort);
  void assert_formula(const SExpr& formula);
  void push();
  void pop();

  SatResult check_sat(std::span<const SExpr> assertions);
  SatResult check_sat(std::initializer_list<SExpr> assertions) {
    return check_sat(std::span<const SExpr>(assertions.begin(), assertions.size()));
  }

  /// Bindings for every declared constant. Throws NoModelAvailable unless
  /// the previous command was a check_sat that returned sat.
  Model get_model();

  /// Declared constants visible at the current frame, in order.
  const std::vector<std::pair<std::string, std::string>>& declarations() const {
    return decls_;
  }

  bool alive() const { return alive_; }
  std::size_t queries() const { return queries_; }

 private:
  SExpr request(const std::string& command, bool is_query = false);
  void command(const std::string& text);
  void close_query_frame();
  void kill();

  SessionOptions options_;
  std::optional<Subprocess> proc_;
  std::string inbox_;
  std::string errbox_;
  bool alive_ = false;
  bool query_frame_open_ = false;
  bool model_ready_ = false;
  std::size_t queries_ = 0;
  std::vector<std::pair<std::string, std::string>> decls_;
  std::vector<std::size_t> frame_marks_;
};

/// Normalizes a get-model or get-value response. Accepts define-fun forms,
/// optionally wrapped in (model ...), and bare (name value) pairs. Only
/// constants listed in `declarations` are kept, in that order.
Model parse_model_response(const SExpr& response,
                           const std::vector<std::pair<std::string, std::string>>& declarations);

/// Decides whether `formula` holds under `model` by checking the bindings
/// as equalities together with the negated formula for unsatisfiability.
bool eval_under_model(const SExpr& formula, const Model& model, Session& session);

/// (not (= x v)) for one binding, (not (and (= x v) ...)) otherwise.
SExpr block_model(const Model& model);

}  // namespace forge::smtio
