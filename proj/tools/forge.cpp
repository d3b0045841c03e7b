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

// forge: build, check, serve, and play interactive SMT tutorial sites.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "forge/cache.hpp"
#include "forge/config.hpp"
#include "forge/corpus.hpp"
#include "forge/exec.hpp"
#include "forge/gamelab.hpp"
#include "forge/serve.hpp"
#include "forge/sitebuild.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitMismatch = 3;

forge::serve::StaticServer* g_server = nullptr;

std::vector<std::string> split_command(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> argv;
  for (std::string tok; in >> tok;) argv.push_back(tok);
  return argv;
}

// --solver wins; otherwise the runner of the named language; otherwise z3 on PATH.
std::vector<std::string> resolve_solver(const std::string& solver, const fs::path& lang_config,
                                        const std::string& label) {
  if (!solver.empty()) {
    auto argv = split_command(solver);
    if (argv.size() == 1 && fs::path(argv[0]).filename() == "z3") argv.push_back("-in");
    return argv;
  }
  if (fs::exists(lang_config)) {
    auto set = forge::config::load_config(lang_config);
    if (const auto* lang = forge::config::lookup(set, label); lang && lang->build_config) {
      return lang->build_config->runner_command;
    }
  }
  return {"z3", "-in"};
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_build(const forge::sitebuild::BuildOptions& opts, bool emit) {
  try {
    auto report = emit ? forge::sitebuild::build(opts) : forge::sitebuild::check(opts);
    std::cout << forge::sitebuild::format_report(report);
    if (!report.ok()) return kExitFailed;
    if (emit) std::cout << "wrote " << report.pages << " page(s) to " << opts.out_dir.string() << "\n";
    return kExitOk;
  } catch (const forge::sitebuild::BuildFailed& e) {
    std::cerr << forge::sitebuild::format_report(e.report()) << e.what() << "\n";
    return kExitFailed;
  } catch (const forge::sitebuild::ContentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  } catch (const forge::config::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const forge::exec::RuntimeUnavailable& e) {
    std::cerr << "runtime unavailable: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: static sites for interactive SMT tutorials"};
  app.require_subcommand(1);

  forge::sitebuild::BuildOptions opts;
  opts.docs_root = "docs";
  opts.config_path = "languages.json";
  opts.cache_dir = ".smt-forge-cache";
  opts.out_dir = "site";

  auto* build = app.add_subcommand("build", "Run every snippet (or reuse cached output) and emit the site");
  build->add_option("--docs", opts.docs_root, "Markdown docs root")->capture_default_str();
  build->add_option("--lang-config", opts.config_path, "Language configuration JSON")->capture_default_str();
  build->add_option("--cache-dir", opts.cache_dir, "Output cache directory")->capture_default_str();
  build->add_option("--out", opts.out_dir, "Bundle output directory")->capture_default_str();
  build->add_option("--jobs", opts.jobs, "Parallel runners (default: CPUs, at most 8)");
  build->add_option("--assets", opts.assets_dir, "Directory copied into <out>/assets");

  auto* check = app.add_subcommand("check", "Like build, without writing a bundle");
  check->add_option("--docs", opts.docs_root)->capture_default_str();
  check->add_option("--lang-config", opts.config_path)->capture_default_str();
  check->add_option("--cache-dir", opts.cache_dir)->capture_default_str();
  check->add_option("--jobs", opts.jobs);

  auto* clean = app.add_subcommand("clean", "Remove every cached output");
  clean->add_option("--cache-dir", opts.cache_dir)->capture_default_str();

  std::string host = "127.0.0.1";
  int port = 8000;
  auto* serve = app.add_subcommand("serve", "Serve a built bundle as static files");
  serve->add_option("--out", opts.out_dir)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--host", host)->capture_default_str();

  auto* game = app.add_subcommand("game", "Formula guessing games");
  game->require_subcommand(1);
  fs::path game_file, formula_file;
  std::string solver, solver_label = "z3";
  long long budget_ms = 10000;
  auto* judge = game->add_subcommand("judge", "Compare a formula with a game's secret");
  judge->add_option("--game", game_file, "Game spec JSON")->required();
  judge->add_option("--formula", formula_file, "File holding your SMT-LIB formula")->required();
  judge->add_option("--solver", solver, "Solver command, e.g. \"z3 -in\"");
  judge->add_option("--lang-config", opts.config_path)->capture_default_str();
  judge->add_option("--solver-label", solver_label, "Language whose runner is the solver")
      ->capture_default_str();
  judge->add_option("--timeout-ms", budget_ms, "Per-query solver budget")->capture_default_str();

  auto* corpus = app.add_subcommand("corpus", "Example corpus checks");
  corpus->require_subcommand(1);
  fs::path fixtures_file = "docs/fixtures.json";
  auto* validate = corpus->add_subcommand("validate", "Compare a built bundle with corpus fixtures");
  validate->add_option("--out", opts.out_dir)->capture_default_str();
  validate->add_option("--fixtures", fixtures_file)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (build->parsed()) return run_build(opts, true);
  if (check->parsed()) return run_build(opts, false);

  if (clean->parsed()) {
    try {
      forge::cache::CacheStore store(opts.cache_dir);
      std::cout << "removed " << store.clear() << " cache entr(ies)\n";
      return kExitOk;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }

  if (serve->parsed()) {
    try {
      forge::serve::StaticServer server(opts.out_dir);
      g_server = &server;
      std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
      });
      std::cout << "serving " << opts.out_dir.string() << " at http://" << host << ":" << port
                << "/\n"
                << std::flush;
      server.run(host, port);
      g_server = nullptr;
      return kExitOk;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }

  if (judge->parsed()) {
    try {
      forge::smtio::SessionOptions so;
      so.command = resolve_solver(solver, opts.config_path, solver_label);
      so.query_budget = std::chrono::milliseconds(budget_ms);
      forge::smtio::Session session(so);
      auto spec = forge::gamelab::load_game(game_file, session);
      auto user = forge::gamelab::parse_user_formula(read_text(formula_file));
      auto verdict = forge::gamelab::judge(user, spec, session);
      std::cout << spec.title << "\n\n" << forge::gamelab::format_verdict(verdict);
      return verdict.equivalent() ? kExitOk : kExitMismatch;
    } catch (const forge::gamelab::SortError& e) {
      std::cerr << "sort error";
      if (!e.constant().empty()) std::cerr << " at '" << e.constant() << "'";
      std::cerr << ": " << e.what() << "\n";
      return kExitConfig;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }

  if (validate->parsed()) {
    try {
      auto deviations =
          forge::corpus::validate_corpus(opts.out_dir, forge::corpus::load_fixtures(fixtures_file));
      for (const auto& d : deviations) std::cout << "deviation: " << d << "\n";
      if (deviations.empty()) std::cout << "corpus matches all fixtures\n";
      return deviations.empty() ? kExitOk : kExitFailed;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  return kExitConfig;
}
