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

#include <string>
#include <string_view>
#include <vector>

#include "forge/smtio/sexpr.hpp"

namespace forge::smtio {

/// True for atoms that name symbols: not numerals, decimals, string
/// literals, bit-vector literals, or keywords.
bool is_symbol(const SExpr& atom);

/// Symbols occurring free in argument position, in first-occurrence order.
/// Function heads, indexed identifiers, and let/forall/exists binders are
/// excluded, as are the Boolean literals.
std::vector<std::string> free_constants(const SExpr& term);

}  // namespace forge::smtio
