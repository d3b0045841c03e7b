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

#include "forge/mdscan.hpp"

#include <algorithm>

namespace forge::mdscan {

namespace {

struct Line {
  std::size_t begin;
  std::size_t content_end;  // excludes the line terminator
  std::size_t end;          // includes the line terminator
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::size_t end = nl == std::string_view::npos ? text.size() : nl + 1;
    std::size_t content_end = nl == std::string_view::npos ? text.size() : nl;
    if (content_end > pos && text[content_end - 1] == '\r') --content_end;
    lines.push_back({pos, content_end, end});
    pos = end;
  }
  return lines;
}

// Consumes up to `depth` block-quote markers ("   > ") and returns the
// offset just past them, or npos when fewer than `depth` are present.
// With depth == npos, consumes as many markers as exist and reports the
// count through `found`.
std::size_t strip_quote_markers(std::string_view s, std::size_t depth,
                                std::size_t* found = nullptr) {
  std::size_t pos = 0;
  std::size_t count = 0;
  while (count < depth) {
    std::size_t p = pos;
    int spaces = 0;
    while (p < s.size() && s[p] == ' ' && spaces < 3) ++p, ++spaces;
    if (p >= s.size() || s[p] != '>') break;
    ++p;
    if (p < s.size() && s[p] == ' ') ++p;
    pos = p;
    ++count;
  }
  if (found) *found = count;
  if (depth != std::string_view::npos && count < depth) return std::string_view::npos;
  return pos;
}

struct Fence {
  char ch;
  std::size_t length;
  std::size_t indent;
  std::string_view rest;
};

std::optional<Fence> match_fence(std::string_view s) {
  std::size_t indent = 0;
  while (indent < s.size() && s[indent] == ' ') ++indent;
  if (indent > 3 || indent >= s.size()) return std::nullopt;
  char ch = s[indent];
  if (ch != '`' && ch != '~') return std::nullopt;
  std::size_t run = 0;
  while (indent + run < s.size() && s[indent + run] == ch) ++run;
  if (run < 3) return std::nullopt;
  return Fence{ch, run, indent, s.substr(indent + run)};
}

std::string_view trim(std::string_view s) {
  auto is_ws = [](char c) { return c == ' ' || c == '\t'; };
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

bool is_closing(std::string_view s, const Fence& open) {
  auto f = match_fence(s);
  return f && f->ch == open.ch && f->length >= open.length && trim(f->rest).empty();
}

std::string_view first_token(std::string_view info) {
  info = trim(info);
  auto end = info.find_first_of(" \t");
  return info.substr(0, end);
}

}  // namespace

std::string_view flag_name(Flag flag) {
  switch (flag) {
    case Flag::NoBuild: return "no-build";
  }
  return "";
}

UnknownFlag::UnknownFlag(std::string token, std::optional<SourceLocation> where)
    : std::runtime_error((where ? where->str() + ": " : std::string()) +
                         "unknown code block flag '" + token + "'"),
      token_(std::move(token)),
      where_(std::move(where)) {}

InfoString parse_info_string(std::string_view info) {
  InfoString result;
  std::size_t pos = 0;
  bool first = true;
  while (pos < info.size()) {
    while (pos < info.size() && (info[pos] == ' ' || info[pos] == '\t')) ++pos;
    if (pos >= info.size()) break;
    std::size_t end = pos;
    while (end < info.size() && info[end] != ' ' && info[end] != '\t') ++end;
    std::string token(info.substr(pos, end - pos));
    pos = end;
    if (first) {
      result.label = std::move(token);
      first = false;
    } else if (token == flag_name(Flag::NoBuild)) {
      result.flags.insert(Flag::NoBuild);
    } else {
      throw UnknownFlag(std::move(token));
    }
  }
  return result;
}

std::vector<FencedBlock> scan_fenced_blocks(std::string_view text) {
  std::vector<FencedBlock> blocks;
  auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size()) {
    std::string_view content =
        text.substr(lines[i].begin, lines[i].content_end - lines[i].begin);
    std::size_t depth = 0;
    std::size_t after_quotes =
        strip_quote_markers(content, std::string_view::npos, &depth);
    auto open = match_fence(content.substr(after_quotes));
    if (!open || (open->ch == '`' && open->rest.find('`') != std::string_view::npos)) {
      ++i;
      continue;
    }

    FencedBlock block;
    block.begin = lines[i].begin;
    block.line = static_cast<int>(i) + 1;
    block.info = std::string(trim(open->rest));

    std::size_t j = i + 1;
    bool closed = false;
    for (; j < lines.size(); ++j) {
      std::string_view body =
          text.substr(lines[j].begin, lines[j].content_end - lines[j].begin);
      std::size_t start = strip_quote_markers(body, depth);
      if (start == std::string_view::npos) break;  // container ended
      body.remove_prefix(start);
      if (is_closing(body, *open)) {
        closed = true;
        break;
      }
      std::size_t strip = 0;
      while (strip < open->indent && strip < body.size() && body[strip] == ' ') ++strip;
      body.remove_prefix(strip);
      block.code.append(body);
      block.code.append(text.substr(lines[j].content_end, lines[j].end - lines[j].content_end));
    }
    if (closed) {
      block.end = lines[j].end;
      i = j + 1;
    } else {
      block.end = j < lines.size() ? lines[j].begin : text.size();
      i = j;
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<Snippet> extract_snippets(const Document& doc,
                                      const config::LanguageConfigSet& set) {
  std::vector<Snippet> snippets;
  for (auto& block : scan_fenced_blocks(doc.text)) {
    std::string_view label = first_token(block.info);
    if (label.empty() || config::lookup(set, label) == nullptr) continue;
    SourceLocation where{doc.path, block.line};
    InfoString info;
    try {
      info = parse_info_string(block.info);
    } catch (const UnknownFlag& e) {
      throw UnknownFlag(e.token(), where);
    }
    Snippet s;
    s.id = doc.path + "#" + std::to_string(snippets.size());
    s.label = *info.label;
    s.flags = std::move(info.flags);
    s.code = std::move(block.code);
    s.location = std::move(where);
    snippets.push_back(std::move(s));
  }
  return snippets;
}

std::string RenderedDoc::serialize() const {
  std::string out;
  for (const auto& node : nodes) {
    if (const auto* seg = std::get_if<MarkdownSegment>(&node)) {
      out += seg->text;
    } else {
      out += std::get<InteractiveBlock>(node).source;
    }
  }
  return out;
}

RenderedDoc rewrite_doc(const Document& doc, const std::vector<Snippet>& snippets,
                        const std::map<std::string, ExecutionResult>& outputs,
                        const config::LanguageConfigSet& set) {
  RenderedDoc rendered;
  rendered.path = doc.path;
  const bool playground = doc.path.starts_with(kPlaygroundDir);

  std::size_t cursor = 0;
  std::size_t index = 0;
  auto flush_text = [&](std::size_t upto) {
    if (upto > cursor) {
      rendered.nodes.emplace_back(MarkdownSegment{doc.text.substr(cursor, upto - cursor)});
    }
    cursor = upto;
  };

  for (const auto& block : scan_fenced_blocks(doc.text)) {
    std::string_view label = first_token(block.info);
    const config::LanguageConfig* lang =
        label.empty() ? nullptr : config::lookup(set, label);
    if (lang == nullptr) continue;

    std::string id = doc.path + "#" + std::to_string(index++);
    auto snippet = std::find_if(snippets.begin(), snippets.end(),
                                [&](const Snippet& s) { return s.id == id; });

    flush_text(block.begin);
    InteractiveBlock ib;
    ib.snippet_id = id;
    ib.label = lang->label;
    ib.highlight = lang->highlight;
    ib.code = snippet != snippets.end() ? snippet->code : block.code;
    ib.show_line_numbers = lang->show_line_numbers;
    ib.read_only = lang->read_only();
    ib.no_build = snippet != snippets.end() ? snippet->no_build()
                                            : parse_info_string(block.info).flags.contains(Flag::NoBuild);
    ib.always_editable = playground && !ib.read_only;
    ib.discuss_url = lang->discuss_url;
    if (!ib.read_only && !ib.no_build) {
      if (auto it = outputs.find(id); it != outputs.end()) ib.output = it->second;
    }
    ib.source = doc.text.substr(block.begin, block.end - block.begin);
    rendered.nodes.emplace_back(std::move(ib));
    cursor = block.end;
  }
  flush_text(doc.text.size());
  return rendered;
}

}  // namespace forge::mdscan
