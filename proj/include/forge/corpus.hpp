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
#include <map>
#include <string>
#include <vector>

namespace forge::corpus {

/// Expected build results for one corpus document.
struct CorpusFixture {
  std::string path;
  std::size_t expected_snippet_count = 0;
  /// snippet id -> expected first whitespace-delimited token of its output
  std::map<std::string, std::string> expected_outputs;
};

/// Reads a JSON array of {path, expectedSnippetCount, expectedOutputs}.
std::vector<CorpusFixture> load_fixtures(const std::filesystem::path& path);

std::string first_token(const std::string& output);

/// Compares a built bundle's manifest with the fixtures. Returns one
/// message per deviation; empty means every expectation holds.
std::vector<std::string> validate_corpus(const std::filesystem::path& bundle_dir,
                                         const std::vector<CorpusFixture>& fixtures);

}  // namespace forge::corpus
