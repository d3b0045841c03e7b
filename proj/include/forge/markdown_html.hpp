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

namespace forge::markdown {

/// Renders a CommonMark subset to HTML: ATX and setext headings, paragraphs,
/// block quotes, bullet and ordered lists, fenced and indented code, thematic
/// breaks, raw HTML blocks, and inline code, emphasis, links, images and
/// autolinks. Output is deterministic.
std::string render(std::string_view markdown);

/// Inline-level rendering of a single paragraph's text.
std::string render_inline(std::string_view text);

std::string escape_html(std::string_view text);

/// Lowercase, hyphen-separated anchor for a heading.
std::string slugify(std::string_view text);

/// Text of the first level-1 heading, if any.
std::string first_heading(std::string_view markdown);

}  // namespace forge::markdown
