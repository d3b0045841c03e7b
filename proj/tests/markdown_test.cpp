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

#include "doctest.h"

using namespace forge::markdown;

TEST_CASE("escaping") {
  CHECK(escape_html("<a href=\"x\">&'</a>") == "&lt;a href=&quot;x&quot;&gt;&amp;'&lt;/a&gt;");
}

TEST_CASE("headings and paragraphs") {
  CHECK(render("# Title\n") == "<h1 id=\"title\">Title</h1>\n");
  CHECK(render("Setext\n===\n") == "<h1 id=\"setext\">Setext</h1>\n");
  CHECK(render("one\ntwo\n\nthree\n") == "<p>one\ntwo</p>\n<p>three</p>\n");
  CHECK(render("---\n") == "<hr />\n");
}

TEST_CASE("inline markup") {
  CHECK(render_inline("*em* and **strong**") == "<em>em</em> and <strong>strong</strong>");
  CHECK(render_inline("`a < b`") == "<code>a &lt; b</code>");
  CHECK(render_inline("[link](x.html)") == "<a href=\"x.html\">link</a>");
  CHECK(render_inline("![alt](p.png)") == "<img src=\"p.png\" alt=\"alt\" />");
  CHECK(render_inline("\\*not em\\*") == "*not em*");
  CHECK(render_inline("<https://example.org>") ==
        "<a href=\"https://example.org\">https://example.org</a>");
  CHECK(render_inline("a &amp; b") == "a &amp; b");
}

TEST_CASE("lists, quotes and code") {
  CHECK(render("- a\n- b\n") == "<ul>\n<li>a</li>\n<li>b</li>\n</ul>\n");
  CHECK(render("1. a\n2. b\n") == "<ol>\n<li>a</li>\n<li>b</li>\n</ol>\n");
  CHECK(render("> quoted\n") == "<blockquote>\n<p>quoted</p>\n</blockquote>\n");
  CHECK(render("```js\nx < 1\n```\n") == "<pre><code class=\"language-js\">x &lt; 1\n</code></pre>\n");
  CHECK(render("    code\n") == "<pre><code>code\n</code></pre>\n");
}

TEST_CASE("slugs and titles") {
  CHECK(slugify("Dogs, cats and mice!") == "dogs-cats-and-mice");
  CHECK(first_heading("```\n# not a heading\n```\n\n## Real one\n") == "Real one");
  CHECK(first_heading("## Two\n\n# One\n") == "One");
  CHECK(first_heading("no headings") == "");
}
