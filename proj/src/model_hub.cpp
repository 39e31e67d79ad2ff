// Copyright 2026 The taxoprompt Authors.
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

#include "taxoprompt/model_hub.hpp"

#include <cstdlib>
#include <string>
#include <vector>

#include "taxoprompt/error.hpp"
#include "taxoprompt/mock_backend.hpp"
#include "taxoprompt/transformer.hpp"

namespace taxoprompt {

namespace fs = std::filesystem;

fs::path default_model_dir() {
  if (const char* dir = std::getenv(std::string(kModelDirEnv).c_str()); dir && *dir) return dir;
  if (const char* home = std::getenv("HOME"); home && *home) {
    return fs::path(home) / ".cache" / "taxoprompt" / "models";
  }
  return fs::path(".cache") / "taxoprompt" / "models";
}

std::unique_ptr<LanguageModel> open_backend(std::string_view model, const fs::path& cache_dir) {
  constexpr std::string_view kMockPrefix = "mock:";
  if (model.substr(0, kMockPrefix.size()) == kMockPrefix) {
    return std::make_unique<MockBackend>(
        MockBackend::load(fs::path(model.substr(kMockPrefix.size()))));
  }
  const std::string name(model);
  if (name.empty()) throw UsageError("no model given");
  std::vector<fs::path> candidates{fs::path(name), cache_dir / name};
  if (auto slash = name.find('/'); slash != std::string::npos) {
    std::string flat = name;
    flat.replace(slash, 1, "--");
    candidates.push_back(cache_dir / flat);
  }
  for (const auto& dir : candidates) {
    if (fs::is_directory(dir) && fs::exists(dir / "config.json")) {
      return TransformerBackend::load(dir, name);
    }
  }
  std::string tried;
  for (const auto& dir : candidates) tried += "\n  " + dir.string();
  throw IoError("model \"" + name + "\" not found; looked for a checkpoint directory at:" + tried);
}

std::unique_ptr<LanguageModel> open_backend(std::string_view model) {
  return open_backend(model, default_model_dir());
}

}  // namespace taxoprompt
