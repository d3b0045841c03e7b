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

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace forge::testing {

namespace fs = std::filesystem;

// A scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("forge-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Absolute path of the reference solver, if one was found at configure time.
inline std::optional<std::string> solver_path() {
#ifdef FORGE_SOLVER_PATH
  if (fs::exists(FORGE_SOLVER_PATH)) return std::string(FORGE_SOLVER_PATH);
#endif
  return std::nullopt;
}

inline std::vector<std::string> solver_command() { return {*solver_path(), "-in"}; }

inline fs::path source_dir() { return FORGE_SOURCE_DIR; }

// Language config JSON running the reference solver; versionCommand is overridable.
inline std::string solver_config_json(long long timeout_ms = 30000,
                                      const std::string& version_command = "") {
  std::string z3 = solver_path().value_or("z3");
  std::string version = version_command.empty() ? "[\"" + z3 + "\", \"--version\"]" : version_command;
  return "[{\"name\": \"Z3\", \"label\": \"z3\", \"highlight\": \"clojure\", "
         "\"showLineNumbers\": true, \"buildConfig\": {\"timeoutMs\": " +
         std::to_string(timeout_ms) + ", \"runnerCommand\": [\"" + z3 +
         "\", \"-in\"], \"versionCommand\": " + version +
         "}, \"discussUrl\": \"https://github.com/Z3Prover/z3/discussions\"},"
         " {\"name\": \"Python\", \"label\": \"python\", \"highlight\": \"python\"}]";
}

// Copies the shipped docs tree into a scratch location so tests may edit it.
inline void copy_corpus(const fs::path& to) {
  fs::copy(source_dir() / "docs", to, fs::copy_options::recursive);
}

}  // namespace forge::testing

#define FORGE_REQUIRE_SOLVER()                                   \
  do {                                                           \
    if (!forge::testing::solver_path()) {                        \
      MESSAGE("reference solver not found; skipping");           \
      return;                                                    \
    }                                                            \
  } while (0)
