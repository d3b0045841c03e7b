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

#include "forge/corpus.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace forge::corpus {

using nlohmann::json;

std::vector<CorpusFixture> load_fixtures(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read fixtures " + path.string());
  json doc = json::parse(in);
  std::vector<CorpusFixture> fixtures;
  for (const auto& f : doc) {
    CorpusFixture fx;
    fx.path = f.at("path").get<std::string>();
    fx.expected_snippet_count = f.at("expectedSnippetCount").get<std::size_t>();
    if (f.contains("expectedOutputs")) {
      fx.expected_outputs = f.at("expectedOutputs").get<std::map<std::string, std::string>>();
    }
    fixtures.push_back(std::move(fx));
  }
  return fixtures;
}

std::string first_token(const std::string& output) {
  auto begin = output.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  auto end = output.find_first_of(" \t\r\n", begin);
  return output.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
}

std::vector<std::string> validate_corpus(const std::filesystem::path& bundle_dir,
                                         const std::vector<CorpusFixture>& fixtures) {
  std::vector<std::string> deviations;
  std::ifstream in(bundle_dir / "manifest.json");
  if (!in) return {"bundle has no manifest.json"};
  json manifest = json::parse(in, nullptr, false);
  if (manifest.is_discarded() || !manifest.contains("snippets")) {
    return {"manifest.json is not a valid manifest"};
  }
  const json& snippets = manifest["snippets"];

  for (const auto& fx : fixtures) {
    std::size_t count = 0;
    for (const auto& [id, entry] : snippets.items()) {
      if (id.starts_with(fx.path + "#")) ++count;
    }
    if (count != fx.expected_snippet_count) {
      deviations.push_back(fx.path + ": expected " + std::to_string(fx.expected_snippet_count) +
                           " snippets, bundle has " + std::to_string(count));
    }
    for (const auto& [id, token] : fx.expected_outputs) {
      if (!snippets.contains(id)) {
        deviations.push_back(id + ": missing from manifest");
        continue;
      }
      const json& entry = snippets[id];
      if (!entry.contains("output")) {
        deviations.push_back(id + ": no precomputed output");
        continue;
      }
      std::string got = first_token(entry["output"].get<std::string>());
      if (got != token) {
        deviations.push_back(id + ": expected first token '" + token + "', got '" + got + "'");
      }
    }
  }
  return deviations;
}

}  // namespace forge::corpus
