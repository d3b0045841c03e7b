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

#include <filesystem>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "forge/config.hpp"
#include "forge/exec_result.hpp"
#include "forge/mdscan.hpp"

namespace forge::sitebuild {

namespace fs = std::filesystem;

struct BuildOptions {
  fs::path docs_root;
  fs::path config_path = "languages.json";
  fs::path cache_dir = ".smt-forge-cache";
  fs::path out_dir = "site";
  /// Worker count for snippet execution; 0 selects default_parallelism().
  unsigned jobs = 0;
  /// Optional directory copied verbatim into <out>/assets (UI bundle,
  /// in-browser solver module).
  fs::path assets_dir;
  /// Called from worker threads right before each runner invocation.
  std::function<void(const mdscan::Snippet&)> on_execute;
};

struct Failure {
  std::string snippet_id;
  mdscan::SourceLocation location;
  RunStatus status = RunStatus::Error;
  std::string diagnostics;
};

struct BuildReport {
  std::size_t executed = 0;
  std::size_t cached = 0;
  std::size_t skipped_no_build = 0;
  std::vector<Failure> failures;
  /// Non-fatal problems, e.g. corrupt cache entries treated as misses.
  std::vector<std::string> warnings;
  std::size_t pages = 0;

  bool ok() const { return failures.empty(); }
  std::size_t total_executable() const { return executed + cached + skipped_no_build; }
};

/// The build ran, but at least one snippet failed. Nothing was written to
/// the output directory.
class BuildFailed : public std::runtime_error {
 public:
  explicit BuildFailed(BuildReport report);
  const BuildReport& report() const { return report_; }

 private:
  BuildReport report_;
};

/// Invalid documents or game specs under the docs root.
class ContentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing or unusable input paths.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// min(hardware threads, 8), at least 1.
unsigned default_parallelism();

/// All `.md` files under `root`, sorted by relative path.
std::vector<mdscan::Document> discover_documents(const fs::path& root);

/// Full build. On success the bundle replaces out_dir atomically; on
/// failure throws BuildFailed and leaves out_dir untouched.
BuildReport build(const BuildOptions& options);

/// Everything build does except writing the bundle. Failures are reported,
/// not thrown.
BuildReport check(const BuildOptions& options);

/// Manifest JSON: languages plus one entry per interactive block, in
/// (document path, block index) order. No timestamps or timings, so a
/// warm rebuild reproduces it byte for byte.
std::string emit_manifest(const std::vector<mdscan::Snippet>& snippets,
                          const std::map<std::string, ExecutionResult>& results,
                          const config::LanguageConfigSet& languages);

/// Human-readable summary, one failure per line.
std::string format_report(const BuildReport& report);

}  // namespace forge::sitebuild
