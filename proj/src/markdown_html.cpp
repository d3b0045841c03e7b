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

#include "forge/markdown_html.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace forge::markdown {

namespace {

using Lines = std::vector<std::string_view>;

bool is_blank(std::string_view s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

std::size_t indent_of(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) {
    if (c == ' ') {
      ++n;
    } else if (c == '\t') {
      n += 4 - (n % 4);
    } else {
      break;
    }
  }
  return n;
}

// Removes up to `n` columns of leading indentation.
std::string_view dedent(std::string_view s, std::size_t n) {
  std::size_t col = 0, i = 0;
  while (i < s.size() && col < n && (s[i] == ' ' || s[i] == '\t')) {
    col += s[i] == '\t' ? 4 - (col % 4) : 1;
    ++i;
  }
  return s.substr(i);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct FenceOpen {
  char ch;
  std::size_t len;
  std::size_t indent;
  std::string info;
};

std::optional<FenceOpen> fence_open(std::string_view line) {
  std::size_t ind = indent_of(line);
  if (ind > 3) return std::nullopt;
  std::string_view s = trim(line);
  if (s.size() < 3 || (s[0] != '`' && s[0] != '~')) return std::nullopt;
  std::size_t run = 0;
  while (run < s.size() && s[run] == s[0]) ++run;
  if (run < 3) return std::nullopt;
  std::string_view info = trim(s.substr(run));
  if (s[0] == '`' && info.find('`') != std::string_view::npos) return std::nullopt;
  return FenceOpen{s[0], run, ind, std::string(info)};
}

bool fence_close(std::string_view line, const FenceOpen& open) {
  if (indent_of(line) > 3) return false;
  std::string_view s = trim(line);
  std::size_t run = 0;
  while (run < s.size() && s[run] == open.ch) ++run;
  return run >= open.len && run == s.size();
}

int atx_level(std::string_view line) {
  if (indent_of(line) > 3) return 0;
  std::string_view s = trim(line);
  int level = 0;
  while (level < static_cast<int>(s.size()) && s[level] == '#') ++level;
  if (level == 0 || level > 6) return 0;
  if (level < static_cast<int>(s.size()) && s[level] != ' ' && s[level] != '\t') return 0;
  return level;
}

std::string_view atx_text(std::string_view line) {
  std::string_view s = trim(line);
  while (!s.empty() && s.front() == '#') s.remove_prefix(1);
  s = trim(s);
  // optional closing sequence
  std::size_t end = s.size();
  while (end > 0 && s[end - 1] == '#') --end;
  if (end < s.size() && (end == 0 || s[end - 1] == ' ')) s = trim(s.substr(0, end));
  return s;
}

bool is_thematic_break(std::string_view line) {
  if (indent_of(line) > 3) return false;
  char mark = 0;
  int count = 0;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') continue;
    if (c != '-' && c != '*' && c != '_') return false;
    if (mark == 0) mark = c;
    if (c != mark) return false;
    ++count;
  }
  return count >= 3;
}

bool is_blockquote(std::string_view line) {
  return indent_of(line) <= 3 && !trim(line).empty() && trim(line).front() == '>';
}

std::string_view strip_quote(std::string_view line) {
  std::string_view s = line;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  if (!s.empty() && s.front() == '>') {
    s.remove_prefix(1);
    if (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    return s;
  }
  return line;
}

struct ListMarker {
  bool ordered;
  char delim;  // bullet char, or '.'/')' for ordered
  long start;
  std::size_t content_indent;  // columns from line start to content
  std::string_view content;
};

std::optional<ListMarker> list_marker(std::string_view line) {
  std::size_t ind = indent_of(line);
  if (ind > 3) return std::nullopt;
  std::string_view s = dedent(line, ind);
  ListMarker m{};
  std::size_t width = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '*' || s[0] == '+')) {
    m.ordered = false;
    m.delim = s[0];
    width = 1;
  } else {
    std::size_t d = 0;
    while (d < s.size() && d < 9 && std::isdigit(static_cast<unsigned char>(s[d]))) ++d;
    if (d == 0 || d >= s.size() || (s[d] != '.' && s[d] != ')')) return std::nullopt;
    m.ordered = true;
    m.delim = s[d];
    m.start = std::stol(std::string(s.substr(0, d)));
    width = d + 1;
  }
  std::string_view rest = s.substr(width);
  if (!rest.empty() && rest.front() != ' ' && rest.front() != '\t') return std::nullopt;
  std::size_t spaces = 0;
  while (spaces < rest.size() && rest[spaces] == ' ') ++spaces;
  if (is_blank(rest)) spaces = 1;
  if (spaces > 4) spaces = 1;  // content is indented code; keep one space
  m.content_indent = ind + width + spaces;
  m.content = rest.size() > spaces ? rest.substr(spaces) : std::string_view{};
  return m;
}

bool is_html_block_start(std::string_view line) {
  if (indent_of(line) > 3) return false;
  std::string_view s = trim(line);
  if (s.size() < 2 || s[0] != '<') return false;
  return std::isalpha(static_cast<unsigned char>(s[1])) || s[1] == '/' || s[1] == '!';
}

bool interrupts_paragraph(std::string_view line) {
  if (atx_level(line) || is_thematic_break(line) || fence_open(line) || is_blockquote(line) ||
      is_html_block_start(line)) {
    return true;
  }
  if (auto m = list_marker(line)) {
    return !m->content.empty() && (!m->ordered || m->start == 1);
  }
  return false;
}

std::string join(const Lines& lines, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) {
    if (i > from) out += '\n';
    out += lines[i];
  }
  return out;
}

std::string render_blocks(const Lines& lines);

std::string strip_first_paragraph(std::string html) {
  if (html.starts_with("<p>")) {
    auto close = html.find("</p>\n");
    if (close != std::string::npos) {
      html = html.substr(3, close - 3) + html.substr(close + 4);
      if (html.ends_with("\n") && html.find('<') == std::string::npos) html.pop_back();
    }
  }
  while (html.ends_with("\n")) html.pop_back();
  return html;
}

std::size_t parse_list(const Lines& lines, std::size_t i, std::string& out) {
  auto first = list_marker(lines[i]);
  std::vector<std::vector<std::string_view>> items;
  std::vector<std::string> storage;
  bool loose = false;
  std::size_t content_indent = first->content_indent;
  items.push_back({first->content});

  std::size_t j = i + 1;
  bool pending_blank = false;
  while (j < lines.size()) {
    std::string_view line = lines[j];
    if (is_blank(line)) {
      pending_blank = true;
      items.back().push_back("");
      ++j;
      continue;
    }
    if (indent_of(line) >= content_indent) {
      if (pending_blank) loose = true;
      pending_blank = false;
      items.back().push_back(dedent(line, content_indent));
      ++j;
      continue;
    }
    if (auto m = list_marker(line);
        m && m->ordered == first->ordered && m->delim == first->delim && !is_thematic_break(line)) {
      if (pending_blank) loose = true;
      pending_blank = false;
      content_indent = m->content_indent;
      items.push_back({m->content});
      ++j;
      continue;
    }
    if (!pending_blank && !interrupts_paragraph(line)) {
      items.back().push_back(trim(line));  // lazy continuation
      ++j;
      continue;
    }
    break;
  }
  // trailing blank lines belong after the list
  while (!items.back().empty() && is_blank(items.back().back())) {
    items.back().pop_back();
    --j;
  }
  j = std::max(j, i + 1);

  if (first->ordered) {
    out += first->start == 1 ? "<ol>\n" : "<ol start=\"" + std::to_string(first->start) + "\">\n";
  } else {
    out += "<ul>\n";
  }
  for (const auto& item : items) {
    std::string inner = render_blocks(item);
    if (!loose) inner = strip_first_paragraph(std::move(inner));
    out += "<li>" + inner + (inner.ends_with(">") && inner.find('\n') != std::string::npos ? "\n" : "") +
           "</li>\n";
  }
  out += first->ordered ? "</ol>\n" : "</ul>\n";
  return j;
}

std::string render_blocks(const Lines& lines) {
  std::string out;
  std::size_t i = 0;
  while (i < lines.size()) {
    std::string_view line = lines[i];
    if (is_blank(line)) {
      ++i;
      continue;
    }
    if (auto f = fence_open(line)) {
      std::string code;
      std::size_t j = i + 1;
      while (j < lines.size() && !fence_close(lines[j], *f)) {
        code += dedent(lines[j], f->indent);
        code += '\n';
        ++j;
      }
      std::string lang = f->info.substr(0, f->info.find_first_of(" \t"));
      out += lang.empty() ? "<pre><code>"
                          : "<pre><code class=\"language-" + escape_html(lang) + "\">";
      out += escape_html(code) + "</code></pre>\n";
      i = j < lines.size() ? j + 1 : j;
      continue;
    }
    if (int level = atx_level(line)) {
      std::string_view text = atx_text(line);
      std::string tag = "h" + std::to_string(level);
      out += "<" + tag + " id=\"" + slugify(text) + "\">" + render_inline(text) + "</" + tag + ">\n";
      ++i;
      continue;
    }
    if (is_thematic_break(line)) {
      out += "<hr />\n";
      ++i;
      continue;
    }
    if (is_blockquote(line)) {
      std::vector<std::string_view> inner;
      std::size_t j = i;
      while (j < lines.size() && !is_blank(lines[j])) {
        inner.push_back(is_blockquote(lines[j]) ? strip_quote(lines[j]) : lines[j]);
        ++j;
      }
      out += "<blockquote>\n" + render_blocks(inner) + "</blockquote>\n";
      i = j;
      continue;
    }
    if (list_marker(line)) {
      i = parse_list(lines, i, out);
      continue;
    }
    if (indent_of(line) >= 4) {
      std::size_t j = i;
      std::size_t last = i;
      while (j < lines.size() && (is_blank(lines[j]) || indent_of(lines[j]) >= 4)) {
        if (!is_blank(lines[j])) last = j;
        ++j;
      }
      std::string code;
      for (std::size_t k = i; k <= last; ++k) {
        code += dedent(lines[k], 4);
        code += '\n';
      }
      out += "<pre><code>" + escape_html(code) + "</code></pre>\n";
      i = last + 1;
      continue;
    }
    if (is_html_block_start(line)) {
      std::size_t j = i;
      while (j < lines.size() && !is_blank(lines[j])) ++j;
      out += join(lines, i, j) + "\n";
      i = j;
      continue;
    }

    // paragraph, possibly a setext heading
    std::size_t j = i + 1;
    int setext = 0;
    while (j < lines.size() && !is_blank(lines[j])) {
      std::string_view t = trim(lines[j]);
      if (indent_of(lines[j]) <= 3 && !t.empty() &&
          t.find_first_not_of('=') == std::string_view::npos) {
        setext = 1;
        break;
      }
      if (indent_of(lines[j]) <= 3 && !t.empty() &&
          t.find_first_not_of('-') == std::string_view::npos) {
        setext = 2;
        break;
      }
      if (interrupts_paragraph(lines[j])) break;
      ++j;
    }
    std::string text;
    for (std::size_t k = i; k < j; ++k) {
      if (k > i) text += '\n';
      text += k == j - 1 ? trim(lines[k]) : dedent(lines[k], 3);
    }
    if (setext) {
      std::string tag = "h" + std::to_string(setext);
      out += "<" + tag + " id=\"" + slugify(text) + "\">" + render_inline(text) + "</" + tag + ">\n";
      i = j + 1;
    } else {
      out += "<p>" + render_inline(text) + "</p>\n";
      i = j;
    }
  }
  return out;
}

bool is_ascii_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

// Finds the closing `delim` for emphasis opened just before `from`.
std::size_t find_closer(std::string_view t, std::size_t from, std::string_view delim) {
  std::size_t pos = from;
  while ((pos = t.find(delim, pos)) != std::string_view::npos) {
    bool after_text = pos > from && t[pos - 1] != ' ' && t[pos - 1] != '\n';
    bool single = delim.size() == 2 || pos + 1 >= t.size() || t[pos + 1] != delim[0];
    if (after_text && single) {
      if (delim[0] == '_' && pos + delim.size() < t.size() &&
          std::isalnum(static_cast<unsigned char>(t[pos + delim.size()]))) {
        pos += delim.size();
        continue;
      }
      return pos;
    }
    pos += delim.size();
  }
  return std::string_view::npos;
}

std::optional<std::pair<std::string, std::size_t>> parse_link_tail(std::string_view t,
                                                                   std::size_t open) {
  // t[open] == '('; returns (destination, index past ')')
  std::size_t i = open + 1;
  while (i < t.size() && t[i] == ' ') ++i;
  std::size_t start = i;
  int depth = 0;
  while (i < t.size() && t[i] != ' ' && !(t[i] == ')' && depth == 0)) {
    if (t[i] == '(') ++depth;
    if (t[i] == ')') --depth;
    ++i;
  }
  std::string dest(t.substr(start, i - start));
  while (i < t.size() && t[i] == ' ') ++i;
  if (i < t.size() && (t[i] == '"' || t[i] == '\'')) {
    char q = t[i];
    auto end = t.find(q, i + 1);
    if (end == std::string_view::npos) return std::nullopt;
    i = end + 1;
    while (i < t.size() && t[i] == ' ') ++i;
  }
  if (i >= t.size() || t[i] != ')') return std::nullopt;
  return std::make_pair(dest, i + 1);
}

std::size_t matching_bracket(std::string_view t, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < t.size(); ++i) {
    if (t[i] == '\\') {
      ++i;
    } else if (t[i] == '[') {
      ++depth;
    } else if (t[i] == ']' && --depth == 0) {
      return i;
    }
  }
  return std::string_view::npos;
}

}  // namespace

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string slugify(std::string_view text) {
  std::string out;
  bool dash = false;
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || u >= 0x80) {
      if (dash && !out.empty()) out += '-';
      out += static_cast<char>(std::tolower(u));
      dash = false;
    } else {
      dash = true;
    }
  }
  return out;
}

std::string render_inline(std::string_view t) {
  std::string out;
  std::size_t i = 0;
  while (i < t.size()) {
    char c = t[i];
    if (c == '\\' && i + 1 < t.size()) {
      if (t[i + 1] == '\n') {
        out += "<br />\n";
        i += 2;
        continue;
      }
      if (is_ascii_punct(t[i + 1])) {
        out += escape_html(t.substr(i + 1, 1));
        i += 2;
        continue;
      }
    }
    if (c == '`') {
      std::size_t run = 0;
      while (i + run < t.size() && t[i + run] == '`') ++run;
      std::string_view delim = t.substr(i, run);
      std::size_t close = i + run;
      for (;;) {
        close = t.find(delim, close);
        if (close == std::string_view::npos) break;
        std::size_t after = close + run;
        if (after < t.size() && t[after] == '`') {
          while (close < t.size() && t[close] == '`') ++close;
          continue;
        }
        break;
      }
      if (close == std::string_view::npos) {
        out += delim;
        i += run;
        continue;
      }
      std::string code(t.substr(i + run, close - i - run));
      for (char& ch : code) {
        if (ch == '\n') ch = ' ';
      }
      if (code.size() >= 2 && code.front() == ' ' && code.back() == ' ' &&
          code.find_first_not_of(' ') != std::string::npos) {
        code = code.substr(1, code.size() - 2);
      }
      out += "<code>" + escape_html(code) + "</code>";
      i = close + run;
      continue;
    }
    if (c == '<') {
      auto close = t.find('>', i);
      if (close != std::string_view::npos) {
        std::string_view inner = t.substr(i + 1, close - i - 1);
        bool has_space = inner.find_first_of(" \n<") != std::string_view::npos;
        auto colon = inner.find(':');
        if (!has_space && colon != std::string_view::npos && colon > 1) {
          out += "<a href=\"" + escape_html(inner) + "\">" + escape_html(inner) + "</a>";
          i = close + 1;
          continue;
        }
        if (!inner.empty() && (std::isalpha(static_cast<unsigned char>(inner[0])) ||
                               inner[0] == '/' || inner[0] == '!')) {
          out += t.substr(i, close - i + 1);
          i = close + 1;
          continue;
        }
      }
    }
    if ((c == '[' || (c == '!' && i + 1 < t.size() && t[i + 1] == '['))) {
      std::size_t open = c == '!' ? i + 1 : i;
      std::size_t close = matching_bracket(t, open);
      if (close != std::string_view::npos && close + 1 < t.size() && t[close + 1] == '(') {
        if (auto tail = parse_link_tail(t, close + 1)) {
          std::string_view label = t.substr(open + 1, close - open - 1);
          if (c == '!') {
            out += "<img src=\"" + escape_html(tail->first) + "\" alt=\"" + escape_html(label) +
                   "\" />";
          } else {
            out += "<a href=\"" + escape_html(tail->first) + "\">" + render_inline(label) + "</a>";
          }
          i = tail->second;
          continue;
        }
      }
    }
    if (c == '*' || c == '_') {
      bool left_ok = c == '*' || i == 0 || !std::isalnum(static_cast<unsigned char>(t[i - 1]));
      std::size_t run = 0;
      while (i + run < t.size() && t[i + run] == c) ++run;
      bool next_ok = i + run < t.size() && t[i + run] != ' ' && t[i + run] != '\n';
      if (left_ok && next_ok) {
        std::string strong(2, c), em(1, c);
        if (run >= 2) {
          std::size_t close = find_closer(t, i + 2, strong);
          if (close != std::string_view::npos) {
            out += "<strong>" + render_inline(t.substr(i + 2, close - i - 2)) + "</strong>";
            i = close + 2;
            continue;
          }
        }
        std::size_t close = find_closer(t, i + 1, em);
        if (close != std::string_view::npos) {
          out += "<em>" + render_inline(t.substr(i + 1, close - i - 1)) + "</em>";
          i = close + 1;
          continue;
        }
      }
      out.append(run, c);
      i += run;
      continue;
    }
    if (c == '&') {
      auto semi = t.find(';', i);
      if (semi != std::string_view::npos && semi - i <= 10 && semi > i + 1) {
        std::string_view name = t.substr(i + 1, semi - i - 1);
        bool entity = name[0] == '#' ||
                      std::all_of(name.begin(), name.end(),
                                  [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)); });
        if (entity) {
          out += t.substr(i, semi - i + 1);
          i = semi + 1;
          continue;
        }
      }
      out += "&amp;";
      ++i;
      continue;
    }
    if (c == ' ' && t.substr(i).starts_with("  \n")) {
      out += "<br />\n";
      i += 3;
      continue;
    }
    if (c == ' ') {
      std::size_t run = 0;
      while (i + run < t.size() && t[i + run] == ' ') ++run;
      if (i + run < t.size() && t[i + run] == '\n' && run >= 2) {
        out += "<br />\n";
        i += run + 1;
        continue;
      }
    }
    out += escape_html(t.substr(i, 1));
    ++i;
  }
  return out;
}

std::string render(std::string_view markdown) {
  Lines lines;
  std::size_t pos = 0;
  while (pos < markdown.size()) {
    auto nl = markdown.find('\n', pos);
    std::string_view line =
        markdown.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return render_blocks(lines);
}

std::string first_heading(std::string_view markdown) {
  std::size_t pos = 0;
  bool in_fence = false;
  std::optional<FenceOpen> fence;
  std::string fallback;  // first lower-level heading, used when there is no h1
  while (pos < markdown.size()) {
    auto nl = markdown.find('\n', pos);
    std::string_view line =
        markdown.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? markdown.size() : nl + 1;
    if (in_fence) {
      if (fence_close(line, *fence)) in_fence = false;
      continue;
    }
    if ((fence = fence_open(line))) {
      in_fence = true;
      continue;
    }
    int level = atx_level(line);
    if (level == 1) return std::string(atx_text(line));
    if (level > 1 && fallback.empty()) fallback = atx_text(line);
  }
  return fallback;
}

}  // namespace forge::markdown
