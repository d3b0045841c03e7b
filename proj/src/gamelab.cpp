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

#include "forge/gamelab.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "forge/config.hpp"
#include "forge/smtio/terms.hpp"
#include "json.hpp"

namespace forge::gamelab {

namespace {

using nlohmann::json;
using smtio::print_sexpr;

const std::set<std::string_view> kOperators = {
    "true", "false", "not", "and", "or",  "xor", "=>",     "=",      "distinct", "ite",
    "<",    "<=",    ">",   ">=",  "+",   "-",   "*",      "/",      "div",      "mod",
    "abs",  "to_real", "to_int", "is_int", "let", "forall", "exists", "_",        "!",
    "as"};

bool is_numeral(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_decimal(std::string_view s) {
  auto dot = s.find('.');
  return dot != std::string_view::npos && is_numeral(s.substr(0, dot)) &&
         is_numeral(s.substr(dot + 1));
}

bool is_simple_symbol(std::string_view s) {
  static constexpr std::string_view kExtra = "~!@$%^&*_-+=<>.?/";
  if (s.empty() || (s.front() >= '0' && s.front() <= '9')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           kExtra.find(c) != std::string_view::npos;
  });
}

// Integer literal usable where a Real is expected: 5 or (- 5).
bool is_int_literal(const SExpr& e) {
  if (e.is_atom()) return is_numeral(e.text());
  return e.has_head("-") && e.children().size() == 2 && e.children()[1].is_atom() &&
         is_numeral(e.children()[1].text());
}

class SortChecker {
 public:
  explicit SortChecker(const std::vector<Declaration>& decls) {
    for (const auto& d : decls) scope_.emplace(d.name, d.sort);
  }

  Sort check(const SExpr& e) {
    if (e.is_atom()) return check_atom(e);
    const auto& c = e.children();
    if (c.empty()) fail(e, "empty application");
    if (!c.front().is_atom()) fail(e, "unsupported application '" + print_sexpr(e) + "'");
    const std::string& op = c.front().text();
    std::span<const SExpr> args(c.data() + 1, c.size() - 1);

    if (op == "let") return check_let(e);
    if (op == "not") {
      arity(e, args, 1, 1);
      expect(args[0], Sort::Bool);
      return Sort::Bool;
    }
    if (op == "and" || op == "or" || op == "xor" || op == "=>") {
      arity(e, args, (op == "and" || op == "or") ? 1 : 2);
      for (const auto& a : args) expect(a, Sort::Bool);
      return Sort::Bool;
    }
    if (op == "=" || op == "distinct") {
      arity(e, args, 2);
      unify(e, args);
      return Sort::Bool;
    }
    if (op == "ite") {
      arity(e, args, 3, 3);
      expect(args[0], Sort::Bool);
      return unify(e, args.subspan(1));
    }
    if (op == "<" || op == "<=" || op == ">" || op == ">=") {
      arity(e, args, 2);
      unify(e, args, std::nullopt, true);
      return Sort::Bool;
    }
    if (op == "+" || op == "-") {
      arity(e, args, 1);
      return unify(e, args, std::nullopt, true);
    }
    if (op == "*") {
      arity(e, args, 1);
      Sort s = unify(e, args, std::nullopt, true);
      int nonconstant = 0;
      for (const auto& a : args) nonconstant += smtio::free_constants(a).empty() ? 0 : 1;
      if (nonconstant > 1) fail(e, "nonlinear multiplication is not supported");
      return s;
    }
    if (op == "div" || op == "mod") {
      arity(e, args, 2, 2);
      expect(args[0], Sort::Int);
      expect(args[1], Sort::Int);
      constant_divisor(e, args[1]);
      return Sort::Int;
    }
    if (op == "/") {
      arity(e, args, 2, 2);
      Sort s = unify(e, args, Sort::Real, true);
      if (s != Sort::Real) fail(e, "'/' expects Real arguments");
      constant_divisor(e, args[1]);
      return Sort::Real;
    }
    if (op == "abs") {
      arity(e, args, 1, 1);
      expect(args[0], Sort::Int);
      return Sort::Int;
    }
    if (op == "to_real") {
      arity(e, args, 1, 1);
      expect(args[0], Sort::Int);
      return Sort::Real;
    }
    if (op == "to_int" || op == "is_int") {
      arity(e, args, 1, 1);
      expect(args[0], Sort::Real);
      return op == "to_int" ? Sort::Int : Sort::Bool;
    }
    fail(c.front(), "unsupported operator '" + op + "'");
  }

 private:
  [[noreturn]] void fail(const SExpr& at, const std::string& why) {
    if (at.is_atom() && smtio::is_symbol(at)) throw SortError(at.text(), why);
    throw SortError(print_sexpr(at), why);
  }

  Sort check_atom(const SExpr& e) {
    const std::string& t = e.text();
    if (t == "true" || t == "false") return Sort::Bool;
    if (is_numeral(t)) return Sort::Int;
    if (is_decimal(t)) return Sort::Real;
    if (!smtio::is_symbol(e)) fail(e, "unsupported literal '" + t + "'");
    auto it = scope_.find(t);
    if (it == scope_.end()) throw SortError(t, "undeclared constant '" + t + "'");
    return it->second;
  }

  Sort check_let(const SExpr& e) {
    const auto& c = e.children();
    if (c.size() != 3 || !c[1].is_list()) fail(e, "malformed let");
    std::vector<std::pair<std::string, Sort>> bound;
    for (const auto& b : c[1].children()) {
      if (!b.is_list() || b.children().size() != 2 || !b.children()[0].is_atom()) {
        fail(e, "malformed let binding");
      }
      bound.emplace_back(b.children()[0].text(), check(b.children()[1]));
    }
    auto saved = scope_;
    for (auto& [name, sort] : bound) scope_[name] = sort;
    Sort body = check(c[2]);
    scope_ = std::move(saved);
    return body;
  }

  void arity(const SExpr& e, std::span<const SExpr> args, std::size_t min,
             std::size_t max = static_cast<std::size_t>(-1)) {
    if (args.size() < min || args.size() > max) {
      fail(e.children().front(), "wrong number of arguments in '" + print_sexpr(e) + "'");
    }
  }

  void expect(const SExpr& arg, Sort want) {
    Sort got = check(arg);
    if (got == want) return;
    if (want == Sort::Real && got == Sort::Int && is_int_literal(arg)) return;
    fail(arg, "expected " + std::string(sort_name(want)) + " but '" + print_sexpr(arg) +
                  "' has sort " + std::string(sort_name(got)));
  }


  // Common sort of all args; Int literals adapt to Real. Arithmetic
  // operators additionally reject Boolean operands.
  Sort unify(const SExpr& e, std::span<const SExpr> args,
             std::optional<Sort> hint = std::nullopt, bool arithmetic = false) {
    std::vector<Sort> sorts;
    for (const auto& a : args) sorts.push_back(check(a));
    if (arithmetic) {
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (sorts[i] == Sort::Bool) {
          fail(args[i], "arithmetic over Bool: '" + print_sexpr(args[i]) + "' in '" +
                            print_sexpr(e) + "'");
        }
      }
    }
    Sort target = hint.value_or(sorts.front());
    if (!hint && target == Sort::Int) {
      bool has_real = std::find(sorts.begin(), sorts.end(), Sort::Real) != sorts.end();
      bool ints_literal = true;
      for (std::size_t j = 0; j < args.size(); ++j) {
        if (sorts[j] == Sort::Int && !is_int_literal(args[j])) ints_literal = false;
      }
      if (has_real && ints_literal) target = Sort::Real;
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (sorts[i] == target) continue;
      if (target == Sort::Real && sorts[i] == Sort::Int && is_int_literal(args[i])) continue;
      std::size_t blame = i;
      if (!smtio::is_symbol(args[i]) && args.front().is_atom() && smtio::is_symbol(args.front())) {
        blame = 0;
      }
      fail(args[blame], "sort mismatch in '" + print_sexpr(e) + "': '" +
                            print_sexpr(args[blame]) + "' has sort " +
                            std::string(sort_name(sorts[blame])));
    }
    return target;
  }

  void constant_divisor(const SExpr& e, const SExpr& divisor) {
    if (!smtio::free_constants(divisor).empty()) {
      fail(e, "division by a non-constant term is not supported");
    }
    if (divisor.is_atom("0") || divisor.is_atom("0.0")) fail(e, "division by zero");
  }

  std::map<std::string, Sort> scope_;
};

std::string require_string(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) {
    throw MalformedGame(std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

Model project(const Model& m, const std::vector<Declaration>& decls) {
  Model out;
  for (const auto& d : decls) {
    const SExpr* v = m.value(d.name);
    if (v == nullptr) throw smtio::SolverError("model lacks a value for '" + d.name + "'");
    out.bindings.emplace_back(d.name, *v);
    out.sorts[d.name] = std::string(sort_name(d.sort));
  }
  return out;
}

SExpr negate(const SExpr& f) { return SExpr::list({SExpr::atom("not"), f}); }

class FrameGuard {
 public:
  explicit FrameGuard(Session& s) : s_(s) { s_.push(); }
  ~FrameGuard() {
    if (!s_.alive()) return;
    try {
      s_.pop();
    } catch (...) {
    }
  }
  FrameGuard(const FrameGuard&) = delete;
  FrameGuard& operator=(const FrameGuard&) = delete;

 private:
  Session& s_;
};

bool holds(const SExpr& formula, const Model& m, Session& session) {
  try {
    return smtio::eval_under_model(formula, m, session);
  } catch (const smtio::UnknownResult& e) {
    throw SolverUnknown(e.what());
  }
}

}  // namespace

std::string_view sort_name(Sort sort) {
  switch (sort) {
    case Sort::Bool: return "Bool";
    case Sort::Int: return "Int";
    case Sort::Real: return "Real";
  }
  return "Bool";
}

Sort check_sort(const SExpr& term, const std::vector<Declaration>& decls) {
  return SortChecker(decls).check(term);
}

GameSpec parse_game(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw MalformedGame("game spec is not valid JSON");
  if (!doc.is_object()) throw MalformedGame("game spec must be a JSON object");
  static const std::set<std::string> kKeys = {"id",     "title",  "description",
                                              "declarations", "secret", "maxRows"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.contains(key)) throw MalformedGame("unknown key '" + key + "'");
  }

  GameSpec game;
  game.id = require_string(doc, "id");
  if (!config::is_valid_label(game.id)) throw MalformedGame("id must match [a-z0-9_-]+");
  game.title = require_string(doc, "title");
  game.description = require_string(doc, "description");

  auto decls = doc.find("declarations");
  if (decls == doc.end() || !decls->is_array() || decls->empty()) {
    throw MalformedGame("declarations must be a non-empty array");
  }
  std::set<std::string> names;
  for (const auto& d : *decls) {
    if (!d.is_object() || d.size() != 2 || !d.contains("name") || !d.contains("sort") ||
        !d["name"].is_string() || !d["sort"].is_string()) {
      throw MalformedGame("each declaration must be {\"name\": string, \"sort\": string}");
    }
    Declaration decl;
    decl.name = d["name"].get<std::string>();
    if (!is_simple_symbol(decl.name) || kOperators.contains(decl.name)) {
      throw MalformedGame("invalid constant name '" + decl.name + "'");
    }
    if (!names.insert(decl.name).second) {
      throw MalformedGame("constant '" + decl.name + "' declared twice");
    }
    std::string sort = d["sort"].get<std::string>();
    if (sort == "Bool") {
      decl.sort = Sort::Bool;
    } else if (sort == "Int") {
      decl.sort = Sort::Int;
    } else if (sort == "Real") {
      decl.sort = Sort::Real;
    } else {
      throw MalformedGame("unsupported sort '" + sort + "' (games support Bool, Int, Real)");
    }
    game.declarations.push_back(std::move(decl));
  }

  game.secret_text = require_string(doc, "secret");
  try {
    game.secret = smtio::parse_one(game.secret_text);
  } catch (const std::exception& e) {
    throw MalformedGame(std::string("secret does not parse: ") + e.what());
  }
  try {
    if (check_sort(game.secret, game.declarations) != Sort::Bool) {
      throw MalformedGame("secret must be a Boolean formula");
    }
  } catch (const SortError& e) {
    throw MalformedGame(std::string("secret: ") + e.what());
  }

  if (auto it = doc.find("maxRows"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 1 || it->get<long long>() > 1000) {
      throw MalformedGame("maxRows must be a positive integer");
    }
    game.max_rows = it->get<int>();
  }
  return game;
}

GameSpec load_game(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedGame("cannot read game spec " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_game(buf.str());
  } catch (const MalformedGame& e) {
    throw MalformedGame(path.string() + ": " + e.what());
  }
}

void check_secret_satisfiable(const GameSpec& game, Session& session) {
  FrameGuard frame(session);
  for (const auto& d : game.declarations) {
    session.declare_const(d.name, std::string(sort_name(d.sort)));
  }
  switch (session.check_sat({game.secret})) {
    case smtio::SatResult::Sat: return;
    case smtio::SatResult::Unsat:
      throw MalformedGame("game '" + game.id + "': secret formula is unsatisfiable");
    case smtio::SatResult::Unknown:
      throw SolverUnknown("game '" + game.id + "': cannot decide whether the secret is satisfiable");
  }
}

GameSpec load_game(const std::filesystem::path& path, Session& session) {
  GameSpec game = load_game(path);
  check_secret_satisfiable(game, session);
  return game;
}

SExpr parse_user_formula(std::string_view text) {
  std::vector<SExpr> forms;
  try {
    forms = smtio::parse_sexpr(text);
  } catch (const smtio::ParseError& e) {
    throw FormulaParseError(e.what());
  }
  if (forms.empty()) throw FormulaParseError("no formula given");
  bool all_asserts = std::all_of(forms.begin(), forms.end(), [](const SExpr& f) {
    return f.has_head("assert") && f.children().size() == 2;
  });
  if (all_asserts) {
    if (forms.size() == 1) return forms.front().children()[1];
    SExpr::List conj{SExpr::atom("and")};
    for (const auto& f : forms) conj.push_back(f.children()[1]);
    return SExpr::list(std::move(conj));
  }
  if (forms.size() != 1) {
    throw FormulaParseError("expected a single formula or a sequence of (assert ...) commands");
  }
  return forms.front();
}

Enumeration enumerate_models(const SExpr& formula, const std::vector<Declaration>& declarations,
                             int k, Session& session) {
  if (k < 1) throw std::invalid_argument("enumerate_models: k must be at least 1");
  Enumeration result;
  FrameGuard frame(session);
  for (const auto& d : declarations) {
    bool known = std::any_of(session.declarations().begin(), session.declarations().end(),
                             [&](const auto& decl) { return decl.first == d.name; });
    if (!known) session.declare_const(d.name, std::string(sort_name(d.sort)));
  }
  std::vector<SExpr> assertions{formula};
  while (static_cast<int>(result.models.size()) < k) {
    auto r = session.check_sat(assertions);
    if (r == smtio::SatResult::Unsat) break;
    if (r == smtio::SatResult::Unknown) {
      result.complete = false;
      break;
    }
    Model m = project(session.get_model(), declarations);
    if (m.empty()) {
      result.models.push_back(std::move(m));
      break;  // over zero constants there is exactly one assignment
    }
    assertions.push_back(smtio::block_model(m));
    result.models.push_back(std::move(m));
  }
  return result;
}

Verdict judge(const SExpr& user, const GameSpec& game, Session& session) {
  if (check_sort(user, game.declarations) != Sort::Bool) {
    throw SortError(print_sexpr(user), "your formula must be Boolean");
  }

  FrameGuard frame(session);
  for (const auto& d : game.declarations) {
    session.declare_const(d.name, std::string(sort_name(d.sort)));
  }

  std::vector<Model> shown;
  auto difference = [&](const SExpr& a, const SExpr& b) {
    auto r = session.check_sat({a, b});
    if (r == smtio::SatResult::Unknown) {
      throw SolverUnknown("solver could not decide whether the formulas differ");
    }
    if (r == smtio::SatResult::Sat) shown.push_back(project(session.get_model(), game.declarations));
    return r == smtio::SatResult::Sat;
  };
  bool user_not_secret = difference(user, negate(game.secret));
  bool secret_not_user = difference(negate(user), game.secret);

  Verdict verdict;
  if (!user_not_secret && !secret_not_user) return verdict;
  verdict.kind = Verdict::Kind::Mismatch;

  if (static_cast<int>(shown.size()) > game.max_rows) shown.resize(game.max_rows);
  int remaining = game.max_rows - static_cast<int>(shown.size());
  if (remaining > 0) {
    SExpr::List conj{SExpr::atom("and"), user};
    for (const auto& m : shown) conj.push_back(smtio::block_model(m));
    auto more = enumerate_models(SExpr::list(std::move(conj)), game.declarations, remaining, session);
    for (auto& m : more.models) shown.push_back(std::move(m));
  }

  for (auto& m : shown) {
    ModelRow row;
    row.satisfies_user = holds(user, m, session);
    row.satisfies_secret = holds(game.secret, m, session);
    row.model = std::move(m);
    verdict.rows.push_back(std::move(row));
  }
  return verdict;
}

std::string format_verdict(const Verdict& verdict) {
  if (verdict.equivalent()) return "Equivalent: your formula matches the secret formula.\n";

  const std::string h0 = "Model", h1 = "Satisfies your formula?",
                    h2 = "Satisfies the secret formula?";
  std::size_t w0 = h0.size();
  for (const auto& r : verdict.rows) w0 = std::max(w0, r.model.str().size());
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
  };
  std::ostringstream out;
  out << "Mismatch: your formula differs from the secret formula.\n\n";
  out << pad(h0, w0) << " | " << pad(h1, h1.size()) << " | " << h2 << "\n";
  out << std::string(w0, '-') << "-+-" << std::string(h1.size(), '-') << "-+-"
      << std::string(h2.size(), '-') << "\n";
  for (const auto& r : verdict.rows) {
    out << pad(r.model.str(), w0) << " | " << pad(r.satisfies_user ? "yes" : "no", h1.size())
        << " | " << (r.satisfies_secret ? "yes" : "no") << "\n";
  }
  return out.str();
}

}  // namespace forge::gamelab
