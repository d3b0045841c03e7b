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

#include "forge/smtio/terms.hpp"

#include <set>

namespace forge::smtio {

namespace {

using Bound = std::multiset<std::string>;

void collect(const SExpr& e, Bound& bound, std::vector<std::string>& out,
             std::set<std::string>& seen) {
  if (e.is_atom()) {
    if (!is_symbol(e) || e.is_atom("true") || e.is_atom("false")) return;
    if (bound.contains(e.text())) return;
    if (seen.insert(e.text()).second) out.push_back(e.text());
    return;
  }
  const auto& c = e.children();
  if (c.empty()) return;
  const SExpr& head = c.front();
  if (head.is_atom("_")) return;
  if (head.is_atom("as")) return;
  if (head.is_atom("!")) {
    if (c.size() > 1) collect(c[1], bound, out, seen);
    return;
  }
  if ((head.is_atom("let") || head.is_atom("forall") || head.is_atom("exists")) &&
      c.size() == 3 && c[1].is_list()) {
    std::vector<std::string> names;
    for (const auto& binding : c[1].children()) {
      if (!binding.is_list() || binding.children().empty()) continue;
      const auto& name = binding.children().front();
      if (!name.is_atom()) continue;
      names.push_back(name.text());
      // let-bound terms see the enclosing scope, not each other
      if (head.is_atom("let") && binding.children().size() > 1) {
        collect(binding.children()[1], bound, out, seen);
      }
    }
    for (const auto& n : names) bound.insert(n);
    collect(c[2], bound, out, seen);
    for (const auto& n : names) bound.erase(bound.find(n));
    return;
  }
  std::size_t first_arg = head.is_atom() ? 1 : 0;
  if (head.is_list() && !head.children().empty() && head.children().front().is_atom("_")) {
    first_arg = 1;
  }
  for (std::size_t i = first_arg; i < c.size(); ++i) collect(c[i], bound, out, seen);
}

}  // namespace

bool is_symbol(const SExpr& atom) {
  if (!atom.is_atom() || atom.text().empty()) return false;
  char c = atom.text().front();
  if (c >= '0' && c <= '9') return false;
  return c != '"' && c != '#' && c != ':';
}

std::vector<std::string> free_constants(const SExpr& term) {
  Bound bound;
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect(term, bound, out, seen);
  return out;
}

}  // namespace forge::smtio
