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

#include "forge/exec.hpp"

#include <algorithm>
#include <cctype>

#include "forge/process.hpp"

namespace forge {

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Success: return "success";
    case RunStatus::Error: return "error";
    case RunStatus::Timeout: return "timeout";
  }
  return "error";
}

std::optional<RunStatus> parse_run_status(std::string_view text) {
  if (text == "success") return RunStatus::Success;
  if (text == "error") return RunStatus::Error;
  if (text == "timeout") return RunStatus::Timeout;
  return std::nullopt;
}

namespace exec {

namespace {

constexpr std::chrono::milliseconds kVersionProbeBudget{10000};

std::vector<std::string> expand_template(const std::vector<std::string>& argv,
                                         long long timeout_ms) {
  static constexpr std::string_view kPlaceholder = "{timeoutMs}";
  std::vector<std::string> out;
  for (std::string arg : argv) {
    for (auto pos = arg.find(kPlaceholder); pos != std::string::npos;
         pos = arg.find(kPlaceholder, pos)) {
      std::string value = std::to_string(timeout_ms);
      arg.replace(pos, kPlaceholder.size(), value);
      pos += value.size();
    }
    out.push_back(std::move(arg));
  }
  return out;
}

// Drops a trailing incomplete UTF-8 sequence left by a byte-level cut.
void trim_partial_utf8(std::string& s) {
  std::size_t i = s.size();
  std::size_t back = 0;
  while (i > 0 && back < 4 && (static_cast<unsigned char>(s[i - 1]) & 0xC0) == 0x80) {
    --i;
    ++back;
  }
  if (i == 0) return;
  auto lead = static_cast<unsigned char>(s[i - 1]);
  std::size_t want = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3
                   : (lead >> 3) == 0x1E ? 4 : 1;
  if (back + 1 < want) s.resize(i - 1);
}

}  // namespace

std::string probe_runtime_version(const config::ExecutionPolicy& policy) {
  if (policy.version_command.empty()) throw RuntimeUnavailable("no version command configured");
  ProcessRun run;
  try {
    run = run_process(policy.version_command, "", {kVersionProbeBudget, kGrace});
  } catch (const SpawnError& e) {
    throw RuntimeUnavailable(e.what());
  }
  const std::string& cmd = policy.version_command.front();
  if (run.timed_out) throw RuntimeUnavailable(cmd + ": version command timed out");
  if (!run.exit_code || *run.exit_code != 0) {
    throw RuntimeUnavailable(cmd + ": version command exited with status " +
                             std::to_string(run.exit_code.value_or(-1)));
  }
  std::size_t pos = 0;
  while (pos < run.out.size()) {
    std::size_t nl = run.out.find('\n', pos);
    std::string_view line(run.out.data() + pos,
                          (nl == std::string::npos ? run.out.size() : nl) - pos);
    pos = nl == std::string::npos ? run.out.size() : nl + 1;
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    if (!line.empty()) return std::string(line);
  }
  throw EmptyVersion(cmd + ": version command printed nothing");
}

ExecutionResult run_code(const std::string& code, const config::ExecutionPolicy& policy,
                         const Runtime& runtime) {
  RunLimits limits;
  limits.timeout = std::chrono::milliseconds(policy.timeout_ms);
  limits.grace = kGrace;
  limits.max_output = kMaxOutputBytes;

  ProcessRun run;
  try {
    run = run_process(expand_template(policy.runner_command, policy.timeout_ms), code, limits,
                      {{kTimeoutEnvVar, std::to_string(policy.timeout_ms)}});
  } catch (const SpawnError& e) {
    throw RuntimeUnavailable(e.what());
  }

  ExecutionResult result;
  result.runtime_name = runtime.name;
  result.runtime_version = runtime.version;
  result.elapsed_ms = run.elapsed.count();
  if (run.timed_out) {
    result.status = RunStatus::Timeout;
  } else if (run.exit_code && *run.exit_code == 0) {
    result.status = RunStatus::Success;
  } else {
    result.status = RunStatus::Error;
  }
  result.output = std::move(run.out);
  if (run.out_truncated) {
    trim_partial_utf8(result.output);
    result.output += kTruncationMarker;
  }
  result.diagnostics = std::move(run.err);
  // Some solvers (z3 among them) report errors on stdout.
  if (result.status != RunStatus::Success && result.diagnostics.empty()) {
    result.diagnostics = result.output;
  }
  return result;
}

ExecutionResult run_snippet(const mdscan::Snippet& snippet,
                            const config::ExecutionPolicy& policy, const Runtime& runtime) {
  return run_code(snippet.code, policy, runtime);
}

}  // namespace exec
}  // namespace forge
