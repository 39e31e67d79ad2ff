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

// Edge-level precision, recall and F-score on directed (hyponym, hypernym)
// matches. Metrics are ratios in [0, 1]; format_percent renders them the way
// results tables print them.

#ifndef TAXOPROMPT_EVALUATION_HPP_
#define TAXOPROMPT_EVALUATION_HPP_

#include <cstddef>
#include <nlohmann/json.hpp>
#include <span>
#include <string>

#include "taxoprompt/terminology.hpp"

namespace taxoprompt {

struct EdgeMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  std::size_t n_predicted = 0;
  std::size_t n_gold = 0;
  std::size_t n_correct = 0;
};

// Throws DataError for an empty gold taxonomy.
EdgeMetrics evaluate(const Taxonomy& predicted, const Taxonomy& gold);

std::size_t count_correct(const Taxonomy& predicted, const Taxonomy& gold);

struct TaxonomyStats {
  std::size_t vertices = 0;
  std::size_t edges = 0;
};

TaxonomyStats stats(const Taxonomy& taxonomy);

// Unweighted mean of P, R and F; counts are summed. Throws DataError for an
// empty list.
EdgeMetrics average_metrics(std::span<const EdgeMetrics> runs);

// Harmonic mean of the averaged P and R, the alternative to averaging F.
double f_of_mean_pr(std::span<const EdgeMetrics> runs);

double harmonic_mean(double p, double r);

// 0.375 -> "37.5".
std::string format_percent(double ratio);

nlohmann::json to_json(const EdgeMetrics& m);
// Throws DataError when a field is missing.
EdgeMetrics metrics_from_json(const nlohmann::json& j);

}  // namespace taxoprompt

#endif  // TAXOPROMPT_EVALUATION_HPP_
