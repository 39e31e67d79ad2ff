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

// Resolves a model name given on the command line to a backend.
//
//   mock:PATH        a mock score table (see mock_backend.hpp)
//   DIR              an existing checkpoint directory
//   NAME             CACHE/NAME, or CACHE/ORG--NAME for "ORG/NAME"
//
// CACHE is $TAXOPROMPT_MODEL_DIR, else ~/.cache/taxoprompt/models.

#ifndef TAXOPROMPT_MODEL_HUB_HPP_
#define TAXOPROMPT_MODEL_HUB_HPP_

#include <filesystem>
#include <memory>
#include <string_view>

#include "taxoprompt/backend.hpp"

namespace taxoprompt {

inline constexpr std::string_view kModelDirEnv = "TAXOPROMPT_MODEL_DIR";

std::filesystem::path default_model_dir();

// Throws IoError when nothing matches.
std::unique_ptr<LanguageModel> open_backend(std::string_view model,
                                            const std::filesystem::path& cache_dir);
std::unique_ptr<LanguageModel> open_backend(std::string_view model);

}  // namespace taxoprompt

#endif  // TAXOPROMPT_MODEL_HUB_HPP_
