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

#include "forge/sitebuild.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "forge/cache.hpp"
#include "forge/exec.hpp"
#include "forge/gamelab.hpp"
#include "forge/markdown_html.hpp"
#include "forge/sha256.hpp"
#include "json.hpp"

namespace forge::sitebuild {

namespace {

using nlohmann::ordered_json;
using mdscan::Document;
using mdscan::Snippet;

constexpr std::string_view kGameSuffix = ".game.json";

constexpr std::string_view kDefaultStylesheet = R"css(body {
  font-family: system-ui, sans-serif;
  margin: 0;
  display: flex;
}
.forge-nav {
  min-width: 14rem;
  padding: 1rem;
  border-right: 1px solid #ddd;
}
.forge-page {
  max-width: 52rem;
  padding: 1rem 2rem;
}
.forge-block {
  border: 1px solid #ccc;
  border-radius: 4px;
  margin: 1rem 0;
}
.forge-block pre {
  margin: 0;
  padding: 0.75rem;
  overflow-x: auto;
}
.forge-output {
  border-top: 1px dashed #ccc;
  background: #f7f7f7;
}
.forge-output[data-stale="true"] {
  opacity: 0.45;
}
)css";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string base64(std::string_view data) {
  std::string out(4 * ((data.size() + 2) / 3) + 1, '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(data.data()),
                          static_cast<int>(data.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

// (path, index) ordering for snippet ids of the form "path#index".
std::pair<std::string, long> split_id(const std::string& id) {
  auto hash = id.rfind('#');
  if (hash == std::string::npos) return {id, -1};
  return {id.substr(0, hash), std::stol(id.substr(hash + 1))};
}

std::string page_path(const std::string& doc_path) {
  std::string p = doc_path;
  if (p.ends_with(".md")) p.resize(p.size() - 3);
  return p + ".html";
}

std::string root_prefix(const std::string& rel_path) {
  std::string prefix;
  for (char c : rel_path) {
    if (c == '/') prefix += "../";
  }
  return prefix;
}

struct Scan {
  config::LanguageConfigSet languages;
  std::vector<Document> docs;
  std::vector<std::vector<Snippet>> snippets;  // parallel to docs
  std::vector<gamelab::GameSpec> games;
};

struct Outcome {
  BuildReport report;
  std::map<std::string, ExecutionResult> results;
};

Scan scan(const BuildOptions& options) {
  Scan s;
  s.languages = config::load_config(options.config_path);
  s.docs = discover_documents(options.docs_root);
  for (const auto& doc : s.docs) {
    try {
      s.snippets.push_back(mdscan::extract_snippets(doc, s.languages));
    } catch (const mdscan::UnknownFlag& e) {
      throw ContentError(e.what());
    }
  }

  std::vector<fs::path> game_files;
  for (const auto& entry : fs::recursive_directory_iterator(options.docs_root)) {
    if (entry.is_regular_file() && entry.path().filename().string().ends_with(kGameSuffix)) {
      game_files.push_back(entry.path());
    }
  }
  std::sort(game_files.begin(), game_files.end());
  std::set<std::string> ids;
  for (const auto& path : game_files) {
    try {
      auto game = gamelab::load_game(path);
      if (!ids.insert(game.id).second) {
        throw ContentError(path.string() + ": duplicate game id '" + game.id + "'");
      }
      s.games.push_back(std::move(game));
    } catch (const gamelab::MalformedGame& e) {
      throw ContentError(e.what());
    }
  }
  return s;
}

Outcome execute(const Scan& s, const BuildOptions& options) {
  Outcome outcome;
  BuildReport& report = outcome.report;

  // Probe only runtimes that have something to run.
  std::map<std::string, exec::Runtime> runtimes;
  for (const auto& doc_snippets : s.snippets) {
    for (const auto& sn : doc_snippets) {
      const auto* lang = config::lookup(s.languages, sn.label);
      if (lang->read_only() || sn.no_build() || runtimes.contains(lang->label)) continue;
      try {
        runtimes[lang->label] = {lang->name, exec::probe_runtime_version(*lang->build_config)};
      } catch (const exec::EmptyVersion& e) {
        throw exec::RuntimeUnavailable(e.what());
      }
    }
  }

  cache::CacheStore store(options.cache_dir);

  struct Job {
    const Snippet* snippet;
    const config::LanguageConfig* lang;
    cache::CacheKey key;
    ExecutionResult result;
  };
  std::vector<Job> jobs;
  for (const auto& doc_snippets : s.snippets) {
    for (const auto& sn : doc_snippets) {
      const auto* lang = config::lookup(s.languages, sn.label);
      if (lang->read_only()) continue;
      if (sn.no_build()) {
        ++report.skipped_no_build;
        continue;
      }
      const auto& rt = runtimes.at(lang->label);
      auto key = cache::make_key(sn.code, rt.name, rt.version);
      std::optional<ExecutionResult> hit;
      try {
        hit = store.get(key);
      } catch (const cache::CorruptEntry& e) {
        report.warnings.push_back(sn.id + ": " + e.what() + " (treated as a miss)");
      }
      if (hit) {
        ++report.cached;
        outcome.results.emplace(sn.id, std::move(*hit));
      } else {
        jobs.push_back({&sn, lang, std::move(key), {}});
      }
    }
  }

  unsigned workers = options.jobs ? options.jobs : default_parallelism();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers && !jobs.empty(); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size() && !abort; i = next++) {
          Job& job = jobs[i];
          try {
            if (options.on_execute) options.on_execute(*job.snippet);
            job.result = exec::run_snippet(*job.snippet, *job.lang->build_config,
                                           runtimes.at(job.lang->label));
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            abort = true;
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);

  for (auto& job : jobs) {
    ++report.executed;
    // Timeouts depend on machine load, so they are retried next build.
    if (job.result.status != RunStatus::Timeout) {
      try {
        store.put(job.key, job.result);
      } catch (const cache::StoreUnwritable& e) {
        report.warnings.push_back(job.snippet->id + ": " + e.what());
      }
    }
    outcome.results.emplace(job.snippet->id, std::move(job.result));
  }

  for (const auto& doc_snippets : s.snippets) {
    for (const auto& sn : doc_snippets) {
      auto it = outcome.results.find(sn.id);
      if (it == outcome.results.end() || it->second.status == RunStatus::Success) continue;
      const auto& r = it->second;
      report.failures.push_back(
          {sn.id, sn.location, r.status, r.diagnostics.empty() ? r.output : r.diagnostics});
    }
  }
  report.pages = s.docs.size();
  return outcome;
}

std::string render_block(const mdscan::InteractiveBlock& b) {
  using markdown::escape_html;
  auto flag = [](bool v) { return v ? "true" : "false"; };
  std::string out = "<div class=\"forge-block\" data-snippet-id=\"" + escape_html(b.snippet_id) +
                    "\" data-label=\"" + escape_html(b.label) + "\" data-highlight=\"" +
                    escape_html(b.highlight) + "\" data-line-numbers=\"" +
                    flag(b.show_line_numbers) + "\" data-read-only=\"" + flag(b.read_only) +
                    "\" data-no-build=\"" + flag(b.no_build) + "\"";
  if (b.always_editable) out += " data-always-editable=\"true\"";
  if (b.discuss_url) out += " data-discuss-url=\"" + escape_html(*b.discuss_url) + "\"";
  out += ">\n<pre class=\"forge-code\"><code class=\"language-" + escape_html(b.highlight) +
         "\">" + escape_html(b.code) + "</code></pre>\n";
  if (b.output) {
    out += "<pre class=\"forge-output\" data-status=\"" +
           std::string(to_string(b.output->status)) + "\">" + escape_html(b.output->output) +
           "</pre>\n";
  }
  out += "</div>\n";
  return out;
}

std::string render_page(const mdscan::RenderedDoc& doc, const std::string& title,
                        const std::vector<std::pair<std::string, std::string>>& nav) {
  using markdown::escape_html;
  const std::string root = root_prefix(doc.path);
  std::string body;
  for (const auto& node : doc.nodes) {
    if (const auto* seg = std::get_if<mdscan::MarkdownSegment>(&node)) {
      body += markdown::render(seg->text);
    } else {
      body += render_block(std::get<mdscan::InteractiveBlock>(node));
    }
  }
  std::string out;
  out += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\" />\n";
  out += "<title>" + escape_html(title) + "</title>\n";
  out += "<link rel=\"stylesheet\" href=\"" + root + "assets/forge.css\" />\n";
  out += "<script type=\"module\" src=\"" + root + "assets/forge-ui.js\"></script>\n";
  out += "</head>\n<body data-site-root=\"" + root + "\" data-manifest=\"" + root +
         "manifest.json\" data-page=\"" + escape_html(doc.path) + "\">\n";
  out += "<nav class=\"forge-nav\">\n<ul>\n";
  for (const auto& [href, label] : nav) {
    out += "<li><a href=\"" + root + escape_html(href) + "\">" + escape_html(label) + "</a></li>\n";
  }
  out += "</ul>\n</nav>\n<main class=\"forge-page\">\n" + body + "</main>\n</body>\n</html>\n";
  return out;
}

std::string doc_title(const Document& doc) {
  std::string t = markdown::first_heading(doc.text);
  if (!t.empty()) return t;
  return fs::path(doc.path).stem().string();
}

void write_bundle(const Scan& s, const Outcome& outcome, const BuildOptions& options,
                  const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> nav;
  for (const auto& doc : s.docs) nav.emplace_back(page_path(doc.path), doc_title(doc));

  std::vector<Snippet> all;
  for (std::size_t i = 0; i < s.docs.size(); ++i) {
    const auto& doc = s.docs[i];
    auto rendered = mdscan::rewrite_doc(doc, s.snippets[i], outcome.results, s.languages);
    write_file(dir / page_path(doc.path), render_page(rendered, doc_title(doc), nav));
    all.insert(all.end(), s.snippets[i].begin(), s.snippets[i].end());
  }

  bool has_index = std::any_of(nav.begin(), nav.end(), [](const auto& n) { return n.first == "index.html"; });
  std::string index = "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\" />\n"
                      "<title>Contents</title>\n"
                      "<link rel=\"stylesheet\" href=\"assets/forge.css\" />\n</head>\n<body>\n"
                      "<main class=\"forge-page\">\n<h1>Contents</h1>\n<ul>\n";
  for (const auto& [href, label] : nav) {
    index += "<li><a href=\"" + markdown::escape_html(href) + "\">" +
             markdown::escape_html(label) + "</a></li>\n";
  }
  index += "</ul>\n</main>\n</body>\n</html>\n";
  if (!has_index) write_file(dir / "index.html", index);

  write_file(dir / "manifest.json", emit_manifest(all, outcome.results, s.languages));

  ordered_json game_index = ordered_json::array();
  for (const auto& g : s.games) {
    ordered_json decls = ordered_json::array();
    for (const auto& d : g.declarations) {
      decls.push_back({{"name", d.name}, {"sort", std::string(gamelab::sort_name(d.sort))}});
    }
    ordered_json entry = {{"id", g.id},
                          {"title", g.title},
                          {"description", g.description},
                          {"declarations", decls},
                          {"maxRows", g.max_rows},
                          {"secretEncoded", base64(g.secret_text)}};
    write_file(dir / "games" / (g.id + ".json"), entry.dump(2) + "\n");
    game_index.push_back({{"id", g.id}, {"title", g.title}, {"path", "games/" + g.id + ".json"}});
  }
  write_file(dir / "games" / "index.json", game_index.dump(2) + "\n");

  write_file(dir / "assets" / "forge.css", kDefaultStylesheet);
  if (!options.assets_dir.empty()) {
    if (!fs::is_directory(options.assets_dir)) {
      throw InputError("assets directory " + options.assets_dir.string() + " does not exist");
    }
    fs::copy(options.assets_dir, dir / "assets",
             fs::copy_options::recursive | fs::copy_options::overwrite_existing);
  }
}

fs::path normalized(const fs::path& p) {
  fs::path abs = fs::absolute(p).lexically_normal();
  if (abs.filename().empty()) abs = abs.parent_path();
  return abs;
}

}  // namespace

BuildFailed::BuildFailed(BuildReport report)
    : std::runtime_error("build failed: " + std::to_string(report.failures.size()) +
                         " snippet(s) did not run cleanly"),
      report_(std::move(report)) {}

unsigned default_parallelism() {
  unsigned n = std::thread::hardware_concurrency();
  return std::clamp(n, 1u, 8u);
}

std::vector<Document> discover_documents(const fs::path& root) {
  if (!fs::is_directory(root)) throw InputError("docs root " + root.string() + " is not a directory");
  std::vector<Document> docs;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".md") continue;
    docs.push_back({fs::relative(entry.path(), root).generic_string(), read_file(entry.path())});
  }
  std::sort(docs.begin(), docs.end(),
            [](const Document& a, const Document& b) { return a.path < b.path; });
  return docs;
}

std::string emit_manifest(const std::vector<Snippet>& snippets,
                          const std::map<std::string, ExecutionResult>& results,
                          const config::LanguageConfigSet& languages) {
  ordered_json langs = ordered_json::object();
  for (const auto& l : languages.configs()) {
    ordered_json entry = {{"name", l.name},
                          {"highlight", l.highlight},
                          {"showLineNumbers", l.show_line_numbers},
                          {"readOnly", l.read_only()}};
    if (l.build_config) entry["timeoutMs"] = l.build_config->timeout_ms;
    if (l.discuss_url) entry["discussUrl"] = *l.discuss_url;
    langs[l.label] = std::move(entry);
  }

  std::vector<const Snippet*> ordered;
  for (const auto& s : snippets) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(), [](const Snippet* a, const Snippet* b) {
    return split_id(a->id) < split_id(b->id);
  });

  ordered_json entries = ordered_json::object();
  for (const Snippet* s : ordered) {
    const auto* lang = config::lookup(languages, s->label);
    bool read_only = lang == nullptr || lang->read_only();
    std::string doc_path = split_id(s->id).first;
    ordered_json e = {{"label", s->label},
                      {"page", page_path(doc_path)},
                      {"codeDigest", sha256_hex(s->code)},
                      {"readOnly", read_only},
                      {"noBuild", s->no_build()},
                      {"alwaysEditable",
                       !read_only && doc_path.starts_with(mdscan::kPlaygroundDir)}};
    if (!read_only && !s->no_build()) {
      if (auto it = results.find(s->id); it != results.end()) {
        e["status"] = std::string(to_string(it->second.status));
        e["output"] = it->second.output;
      }
    }
    entries[s->id] = std::move(e);
  }
  ordered_json doc = {{"format", 1}, {"languages", langs}, {"snippets", entries}};
  return doc.dump(2) + "\n";
}

BuildReport check(const BuildOptions& options) {
  Scan s = scan(options);
  return execute(s, options).report;
}

BuildReport build(const BuildOptions& options) {
  Scan s = scan(options);
  Outcome outcome = execute(s, options);
  if (!outcome.report.ok()) throw BuildFailed(std::move(outcome.report));

  const fs::path out = normalized(options.out_dir);
  const fs::path parent = out.parent_path();
  const fs::path staging = parent / ("." + out.filename().string() + ".staging");
  const fs::path previous = parent / ("." + out.filename().string() + ".previous");
  fs::create_directories(parent);
  fs::remove_all(staging);
  try {
    fs::create_directories(staging);
    write_bundle(s, outcome, options, staging);
  } catch (...) {
    std::error_code ignored;
    fs::remove_all(staging, ignored);
    throw;
  }
  fs::remove_all(previous);
  if (fs::exists(out)) fs::rename(out, previous);
  fs::rename(staging, out);
  fs::remove_all(previous);
  return std::move(outcome.report);
}

std::string format_report(const BuildReport& report) {
  std::ostringstream out;
  out << "executed " << report.executed << ", cached " << report.cached << ", skipped (no-build) "
      << report.skipped_no_build << "\n";
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
  for (const auto& f : report.failures) {
    out << "FAILED " << f.snippet_id << " (" << f.location.str() << "): " << to_string(f.status)
        << "\n";
    std::istringstream lines(f.diagnostics);
    for (std::string line; std::getline(lines, line);) out << "    " << line << "\n";
  }
  return out.str();
}

}  // namespace forge::sitebuild
