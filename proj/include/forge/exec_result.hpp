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

#include <optional>
#include <string>
#include <string_view>

namespace forge {

enum class RunStatus { Success, Error, Timeout };

std::string_view to_string(RunStatus status);
std::optional<RunStatus> parse_run_status(std::string_view text);

/// Classified outcome of one runner invocation.
struct ExecutionResult {
  RunStatus status = RunStatus::Success;
  std::string output;
  std::string diagnostics;
  long long elapsed_ms = 0;
  std::string runtime_name;
  std::string runtime_version;

  bool operator==(const ExecutionResult&) const = default;
};

}  // namespace forge
