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

#include "taxoprompt/evaluation.hpp"

#include <cstdio>

#include "taxoprompt/error.hpp"

namespace taxoprompt {

std::size_t count_correct(const Taxonomy& predicted, const Taxonomy& gold) {
  const Taxonomy& small = predicted.size() <= gold.size() ? predicted : gold;
  const Taxonomy& large = predicted.size() <= gold.size() ? gold : predicted;
  std::size_t n = 0;
  for (const auto& e : small.edges()) n += large.contains(e) ? 1 : 0;
  return n;
}

double harmonic_mean(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

EdgeMetrics evaluate(const Taxonomy& predicted, const Taxonomy& gold) {
  if (gold.empty()) throw DataError("cannot evaluate against an empty gold taxonomy");
  EdgeMetrics m;
  m.n_predicted = predicted.size();
  m.n_gold = gold.size();
  m.n_correct = count_correct(predicted, gold);
  m.precision = m.n_predicted ? static_cast<double>(m.n_correct) / static_cast<double>(m.n_predicted)
                              : 0.0;
  m.recall = static_cast<double>(m.n_correct) / static_cast<double>(m.n_gold);
  // 2c / (|P| + |G|) is the harmonic mean of P and R computed from counts, so
  // equal sizes give F bit-identical to P and R.
  m.f_score = static_cast<double>(2 * m.n_correct) / static_cast<double>(m.n_predicted + m.n_gold);
  return m;
}

TaxonomyStats stats(const Taxonomy& taxonomy) {
  return TaxonomyStats{taxonomy.vertices().size(), taxonomy.size()};
}

EdgeMetrics average_metrics(std::span<const EdgeMetrics> runs) {
  if (runs.empty()) throw DataError("cannot average an empty list of metrics");
  EdgeMetrics avg;
  for (const auto& m : runs) {
    avg.precision += m.precision;
    avg.recall += m.recall;
    avg.f_score += m.f_score;
    avg.n_predicted += m.n_predicted;
    avg.n_gold += m.n_gold;
    avg.n_correct += m.n_correct;
  }
  const auto n = static_cast<double>(runs.size());
  avg.precision /= n;
  avg.recall /= n;
  avg.f_score /= n;
  return avg;
}

double f_of_mean_pr(std::span<const EdgeMetrics> runs) {
  const EdgeMetrics avg = average_metrics(runs);
  return harmonic_mean(avg.precision, avg.recall);
}

std::string format_percent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * ratio);
  return buf;
}

nlohmann::json to_json(const EdgeMetrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall},       {"f_score", m.f_score},
          {"n_predicted", m.n_predicted}, {"n_gold", m.n_gold}, {"n_correct", m.n_correct}};
}

EdgeMetrics metrics_from_json(const nlohmann::json& j) {
  try {
    EdgeMetrics m;
    m.precision = j.at("precision").get<double>();
    m.recall = j.at("recall").get<double>();
    m.f_score = j.at("f_score").get<double>();
    m.n_predicted = j.value("n_predicted", std::size_t{0});
    m.n_gold = j.value("n_gold", std::size_t{0});
    m.n_correct = j.value("n_correct", std::size_t{0});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed metrics record: ") + e.what());
  }
}

}  // namespace taxoprompt
