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

namespace forge::smtio {

namespace {

const char* kind_name(ParseError::Kind kind) {
  return kind == ParseError::Kind::UnbalancedParen ? "unbalanced parenthesis"
                                                   : "unterminated string literal";
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> forms;
    for (;;) {
      skip_trivia();
      if (at_end()) break;
      if (peek() == ')') {
        throw ParseError(ParseError::Kind::UnbalancedParen, line_, col_);
      }
      forms.push_back(read_form());
    }
    return forms;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (!at_end()) {
      if (is_space(peek())) {
        advance();
      } else if (peek() == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  SExpr read_form() {
    if (peek() != '(') return read_atom();

    // Iterative over nesting depth so deep input cannot exhaust the stack.
    struct Open {
      int line, col;
      SExpr::List children;
    };
    std::vector<Open> stack;
    stack.push_back({line_, col_, {}});
    advance();
    for (;;) {
      skip_trivia();
      if (at_end()) {
        throw ParseError(ParseError::Kind::UnbalancedParen, stack.front().line,
                         stack.front().col);
      }
      char c = peek();
      if (c == '(') {
        stack.push_back({line_, col_, {}});
        advance();
      } else if (c == ')') {
        advance();
        SExpr done = SExpr::list(std::move(stack.back().children));
        stack.pop_back();
        if (stack.empty()) return done;
        stack.back().children.push_back(std::move(done));
      } else {
        stack.back().children.push_back(read_atom());
      }
    }
  }

  SExpr read_atom() {
    std::size_t start = pos_;
    int line = line_, col = col_;
    if (peek() == '"') {
      advance();
      for (;;) {
        if (at_end()) throw ParseError(ParseError::Kind::UnterminatedString, line, col);
        if (peek() == '"') {
          advance();
          // "" is an escaped quote inside an SMT-LIB string literal.
          if (!at_end() && peek() == '"') {
            advance();
            continue;
          }
          break;
        }
        advance();
      }
    } else if (peek() == '|') {
      advance();
      while (!at_end() && peek() != '|') advance();
      if (at_end()) throw ParseError(ParseError::Kind::UnterminatedString, line, col);
      advance();
    } else {
      while (!at_end()) {
        char c = peek();
        if (is_space(c) || c == '(' || c == ')' || c == ';' || c == '"') break;
        if (c == '|') {
          // a|b c| is one symbol with a quoted part
          advance();
          while (!at_end() && peek() != '|') advance();
          if (at_end()) throw ParseError(ParseError::Kind::UnterminatedString, line, col);
        }
        advance();
      }
    }
    return SExpr::atom(std::string(text_.substr(start, pos_ - start)));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

void print_into(const SExpr& e, std::string& out) {
  if (e.is_atom()) {
    out += e.text();
    return;
  }
  // Explicit stack: printing mirrors the iterative reader.
  struct Frame {
    const SExpr::List* list;
    std::size_t next;
  };
  std::vector<Frame> stack{{&e.children(), 0}};
  out += '(';
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next == top.list->size()) {
      out += ')';
      stack.pop_back();
      continue;
    }
    if (top.next > 0) out += ' ';
    const SExpr& child = (*top.list)[top.next++];
    if (child.is_atom()) {
      out += child.text();
    } else {
      out += '(';
      stack.push_back({&child.children(), 0});
    }
  }
}

}  // namespace

bool SExpr::has_head(std::string_view head) const {
  return is_list() && !children().empty() && children().front().is_atom(head);
}

ParseError::ParseError(Kind kind, int line, int column)
    : std::runtime_error(std::string(kind_name(kind)) + " at line " + std::to_string(line) +
                         ", column " + std::to_string(column)),
      kind_(kind),
      line_(line),
      column_(column) {}

std::vector<SExpr> parse_sexpr(std::string_view text) { return Reader(text).read_all(); }

SExpr parse_one(std::string_view text) {
  auto forms = parse_sexpr(text);
  if (forms.size() != 1) {
    throw std::invalid_argument("expected exactly one s-expression, found " +
                                std::to_string(forms.size()));
  }
  return std::move(forms.front());
}

std::string print_sexpr(const SExpr& expr) {
  std::string out;
  print_into(expr, out);
  return out;
}

std::optional<std::size_t> complete_form_length(std::string_view text) {
  std::size_t i = 0;
  int depth = 0;
  bool started = false;
  while (i < text.size()) {
    char c = text[i];
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '"' || c == '|') {
      started = true;
      char quote = c;
      ++i;
      for (;;) {
        if (i >= text.size()) return std::nullopt;
        if (text[i] == quote) {
          if (quote == '"' && i + 1 < text.size() && text[i + 1] == '"') {
            i += 2;
            continue;
          }
          if (quote == '"' && i + 1 == text.size()) return std::nullopt;  // may be "" split
          ++i;
          break;
        }
        ++i;
      }
      if (depth == 0) {
        // A top-level string atom ends at a delimiter.
        if (i < text.size() && (is_space(text[i]) || text[i] == '(' || text[i] == ')')) return i;
        if (i == text.size()) return std::nullopt;
      }
      continue;
    }
    if (c == '(') {
      if (started && depth == 0) return i;
      ++depth;
      started = true;
    } else if (c == ')') {
      if (depth == 0) return i + 1;  // stray ')': let the parser report it
      --depth;
      if (depth == 0) return i + 1;
    } else if (is_space(c)) {
      if (started && depth == 0) return i;
    } else {
      started = true;
    }
    ++i;
  }
  return std::nullopt;
}

}  // namespace forge::smtio
