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
#include <stdexcept>
#include <string>

#include "forge/config.hpp"
#include "forge/exec_result.hpp"
#include "forge/mdscan.hpp"

namespace forge::exec {

/// Window between the polite stop signal and the forced kill.
inline constexpr std::chrono::milliseconds kGrace{2000};
/// Captured stdout is cut at this many bytes.
inline constexpr std::size_t kMaxOutputBytes = 65536;
inline constexpr std::string_view kTruncationMarker = "…[truncated]";
/// Environment variable carrying the snippet budget to runners.
inline constexpr const char* kTimeoutEnvVar = "SMT_FORGE_TIMEOUT_MS";

/// The runtime cannot be used at all: missing binary, failing version
/// command. This is a configuration problem, not a snippet failure.
class RuntimeUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyVersion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// First non-empty line of the version command's stdout, trimmed.
std::string probe_runtime_version(const config::ExecutionPolicy& policy);

/// Runtime identity recorded in each result and in cache keys.
struct Runtime {
  std::string name;
  std::string version;
};

/// Pipes the snippet's code into the runner and classifies the outcome:
/// success iff exit 0 within budget, error iff nonzero exit within budget,
/// timeout otherwise.
ExecutionResult run_snippet(const mdscan::Snippet& snippet,
                            const config::ExecutionPolicy& policy,
                            const Runtime& runtime);

/// Same as run_snippet, over raw code.
ExecutionResult run_code(const std::string& code, const config::ExecutionPolicy& policy,
                         const Runtime& runtime);

}  // namespace forge::exec
