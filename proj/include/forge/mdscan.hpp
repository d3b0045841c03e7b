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

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "forge/config.hpp"
#include "forge/exec_result.hpp"

namespace forge::mdscan {

enum class Flag { NoBuild };

std::string_view flag_name(Flag flag);

struct SourceLocation {
  std::string path;
  int line = 0;  // 1-based line of the opening fence

  std::string str() const { return path + ":" + std::to_string(line); }
  bool operator==(const SourceLocation&) const = default;
};

/// One configured fenced block.
struct Snippet {
  std::string id;  // "<relative path>#<index among configured blocks>"
  std::string label;
  std::set<Flag> flags;
  std::string code;  // block body, byte-exact, fences excluded
  SourceLocation location;

  bool no_build() const { return flags.contains(Flag::NoBuild); }
  bool operator==(const Snippet&) const = default;
};

struct Document {
  std::string path;  // relative to the docs root, '/'-separated
  std::string text;
};

class UnknownFlag : public std::runtime_error {
 public:
  UnknownFlag(std::string token, std::optional<SourceLocation> where = std::nullopt);
  const std::string& token() const { return token_; }
  const std::optional<SourceLocation>& location() const { return where_; }

 private:
  std::string token_;
  std::optional<SourceLocation> where_;
};

struct InfoString {
  std::optional<std::string> label;
  std::set<Flag> flags;
};

/// First whitespace-delimited token is the label, the rest are flags.
/// Throws UnknownFlag for any flag outside the recognized set.
InfoString parse_info_string(std::string_view info);

/// Every configured fenced block of `doc`, in document order. Pure.
std::vector<Snippet> extract_snippets(const Document& doc,
                                      const config::LanguageConfigSet& set);

struct InteractiveBlock {
  std::string snippet_id;
  std::string label;
  std::string highlight;
  std::string code;
  bool show_line_numbers = false;
  bool read_only = false;
  bool no_build = false;
  bool always_editable = false;
  std::optional<std::string> discuss_url;
  std::optional<ExecutionResult> output;
  /// Original source bytes of the whole fenced block, fences included.
  std::string source;
};

struct MarkdownSegment {
  std::string text;
};

using RenderedNode = std::variant<MarkdownSegment, InteractiveBlock>;

struct RenderedDoc {
  std::string path;
  std::vector<RenderedNode> nodes;

  /// Expands each placeholder back into its original fenced block.
  std::string serialize() const;
};

/// Documents under this top-level directory of the docs root hold freeform
/// editors; their blocks are marked always-editable.
inline constexpr std::string_view kPlaygroundDir = "playground/";

RenderedDoc rewrite_doc(const Document& doc, const std::vector<Snippet>& snippets,
                        const std::map<std::string, ExecutionResult>& outputs,
                        const config::LanguageConfigSet& set);

/// A fenced block found by the scanner, configured or not.
struct FencedBlock {
  std::size_t begin = 0;  // byte offset of the opening fence line
  std::size_t end = 0;    // byte offset just past the closing fence line
  int line = 0;
  std::string info;
  std::string code;
};

/// Low-level scan shared by extraction and rewriting.
std::vector<FencedBlock> scan_fenced_blocks(std::string_view text);

}  // namespace forge::mdscan
