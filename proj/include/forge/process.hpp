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

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace forge {

/// Raised when a child process cannot be started at all (exec failure,
/// missing binary, pipe exhaustion). Carries the failing errno text.
class SpawnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A child process with piped stdin/stdout/stderr, running in its own
/// process group so that signals reach any grandchildren it forks.
///
/// The destructor kills the whole group and reaps the child if it is still
/// running; a Subprocess never leaks a zombie or an orphaned runner.
class Subprocess {
 public:
  using Env = std::vector<std::pair<std::string, std::string>>;

  static Subprocess spawn(const std::vector<std::string>& argv,
                          const Env& extra_env = {});

  Subprocess(Subprocess&& other) noexcept;
  Subprocess& operator=(Subprocess&& other) noexcept;
  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;
  ~Subprocess();

  int pid() const { return pid_; }
  int stdin_fd() const { return in_; }
  int stdout_fd() const { return out_; }
  int stderr_fd() const { return err_; }

  void close_stdin();
  void close_stdout();
  void close_stderr();

  /// Sends `sig` to the child's process group.
  void signal_group(int sig);

  /// Non-blocking reap. Returns the exit code once the child has exited;
  /// death by signal N is reported as 128 + N.
  std::optional<int> try_wait();
  bool exited() const { return exit_code_.has_value(); }

 private:
  Subprocess() = default;
  void release();

  int pid_ = -1;
  int in_ = -1;
  int out_ = -1;
  int err_ = -1;
  std::optional<int> exit_code_;
};

/// Outcome of running a process to completion with a wall-clock budget.
struct ProcessRun {
  std::optional<int> exit_code;  // absent only if the child could not be reaped
  std::string out;
  std::string err;
  bool timed_out = false;
  bool out_truncated = false;
  std::chrono::milliseconds elapsed{0};
};

struct RunLimits {
  std::chrono::milliseconds timeout{30000};
  /// Window between the polite SIGTERM and the forced SIGKILL.
  std::chrono::milliseconds grace{2000};
  /// Captured stdout beyond this many bytes is discarded.
  std::size_t max_output = static_cast<std::size_t>(-1);
};

/// Runs `argv`, feeds `input` on stdin, captures both output streams, and
/// enforces the timeout: SIGTERM to the process group at `timeout`, SIGKILL
/// shortly before `timeout + grace` so that the reported elapsed time never
/// exceeds the combined budget.
ProcessRun run_process(const std::vector<std::string>& argv,
                       const std::string& input, const RunLimits& limits,
                       const Subprocess::Env& extra_env = {});

}  // namespace forge
