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

// Run manifests and (template, k) grid sweeps.

#ifndef TAXOPROMPT_EXPERIMENT_HPP_
#define TAXOPROMPT_EXPERIMENT_HPP_

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "taxoprompt/analysis.hpp"
#include "taxoprompt/backend.hpp"
#include "taxoprompt/evaluation.hpp"
#include "taxoprompt/induction.hpp"

namespace taxoprompt {

std::string_view tool_version();

// Lowercase hex SHA-256 of the file contents. Throws IoError.
std::string sha256_file(const std::filesystem::path& path);

// "2026-01-31T12:00:00Z".
std::string utc_timestamp();

struct RunManifest {
  std::string command;
  InductionConfig config;
  std::string model_name;
  ModelKind model_kind = ModelKind::kMasked;
  std::string model_source;
  std::string terminology_path;
  std::string terminology_sha256;
  std::string terminology_format;
  std::size_t n_terms = 0;
  std::size_t collapsed_duplicates = 0;
  std::string output_path;
  std::size_t n_edges = 0;
  std::vector<Term> skipped;
  std::vector<Term> excluded;
  std::string started_at;
  std::string finished_at;

  nlohmann::json to_json() const;
};

void write_json(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

struct SweepCell {
  PromptTemplate tmpl;
  std::size_t k = 1;
  EdgeMetrics metrics;
  std::size_t skipped = 0;
};

struct SweepResult {
  std::string method;
  std::string model;
  // Sorted by (template name, k).
  std::vector<SweepCell> rows;
  // Index into rows of the highest F; ties go to the smallest (name, k).
  std::size_t best = 0;

  nlohmann::json to_json() const;
};

// One induction per template at the largest k; smaller k reuse its
// rankings. Throws UsageError for an empty grid.
SweepResult sweep(const LanguageModel& model, const InductionConfig& base,
                  const std::vector<PromptTemplate>& templates, std::vector<std::size_t> ks,
                  const Terminology& terminology, const Taxonomy& gold);

// Reads the rows of a sweep JSON file (or a single evaluate JSON file that
// names its template) as per-template runs for attach_average_f.
std::vector<PromptRun> prompt_runs_from_json(const nlohmann::json& j);

}  // namespace taxoprompt

#endif  // TAXOPROMPT_EXPERIMENT_HPP_
