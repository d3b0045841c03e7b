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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace forge::smtio {

/// An SMT-LIB s-expression: an atom or a list of s-expressions.
///
/// Atom text is kept exactly as written, so string literals keep their
/// quotes and quoted symbols keep their bars.
class SExpr {
 public:
  using List = std::vector<SExpr>;

  SExpr() : value_(List{}) {}
  static SExpr atom(std::string text) { return SExpr(std::move(text)); }
  static SExpr list(List children) { return SExpr(std::move(children)); }
  static SExpr list(std::initializer_list<SExpr> children) { return SExpr(List(children)); }

  bool is_atom() const { return std::holds_alternative<std::string>(value_); }
  bool is_list() const { return !is_atom(); }

  /// Requires is_atom().
  const std::string& text() const { return std::get<std::string>(value_); }
  /// Requires is_list().
  const List& children() const { return std::get<List>(value_); }
  List& children() { return std::get<List>(value_); }

  bool is_atom(std::string_view text) const { return is_atom() && this->text() == text; }
  /// True for a list whose first child is the atom `head`.
  bool has_head(std::string_view head) const;

  bool operator==(const SExpr&) const = default;

 private:
  explicit SExpr(std::string text) : value_(std::move(text)) {}
  explicit SExpr(List children) : value_(std::move(children)) {}

  std::variant<std::string, List> value_;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { UnbalancedParen, UnterminatedString };

  ParseError(Kind kind, int line, int column);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

/// Parses every top-level form. Comments run from ';' to end of line.
/// Unclosed lists are reported at their opening parenthesis; a stray ')'
/// is reported where it occurs.
std::vector<SExpr> parse_sexpr(std::string_view text);

/// Parses text that must hold exactly one form.
SExpr parse_one(std::string_view text);

/// Canonical form: single spaces between children, no trailing space.
std::string print_sexpr(const SExpr& expr);

/// Length of the first complete top-level form in `text` (leading
/// whitespace and comments included), or nullopt if the text does not
/// yet contain one. Used to frame solver responses on a stream.
std::optional<std::size_t> complete_form_length(std::string_view text);

}  // namespace forge::smtio
