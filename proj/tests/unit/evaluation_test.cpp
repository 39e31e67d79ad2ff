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

#include <gtest/gtest.h>

#include <random>

#include "taxoprompt/error.hpp"

namespace taxoprompt {
namespace {

Taxonomy edges(std::initializer_list<std::pair<const char*, const char*>> list) {
  Taxonomy t;
  for (const auto& [a, b] : list) t.add(a, b);
  return t;
}

// Counts matches by comparing surfaces pairwise.
std::size_t brute_force_correct(const Taxonomy& predicted, const Taxonomy& gold) {
  std::size_t n = 0;
  for (const auto& p : predicted.edges()) {
    for (const auto& g : gold.edges()) {
      if (p.hyponym.surface() == g.hyponym.surface() &&
          p.hypernym.surface() == g.hypernym.surface()) {
        ++n;
      }
    }
  }
  return n;
}

Taxonomy random_taxonomy(std::mt19937& rng, std::size_t n_terms, std::size_t n_edges) {
  Taxonomy t;
  while (t.size() < n_edges) {
    const auto a = rng() % n_terms;
    const auto b = rng() % n_terms;
    if (a != b) t.add("w" + std::to_string(a), "w" + std::to_string(b));
  }
  return t;
}

TEST(Evaluate, IdentityScoresOneHundred) {
  const auto gold = edges({{"trout", "fish"}, {"fish", "animal"}, {"oak", "tree"}});
  const auto m = evaluate(gold, gold);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.f_score, 1.0);
  EXPECT_EQ(format_percent(m.f_score), "100.0");
}

TEST(Evaluate, HalfOverlapScoresFifty) {
  const auto gold = edges({{"a", "b"}, {"c", "d"}});
  const auto pred = edges({{"a", "b"}, {"c", "e"}});
  const auto m = evaluate(pred, gold);
  EXPECT_EQ(m.precision, 0.5);
  EXPECT_EQ(m.recall, 0.5);
  EXPECT_EQ(m.f_score, 0.5);
  EXPECT_EQ(m.n_correct, 1u);
}

TEST(Evaluate, DirectionMatters) {
  const auto m = evaluate(edges({{"fish", "trout"}}), edges({{"trout", "fish"}}));
  EXPECT_EQ(m.n_correct, 0u);
  EXPECT_EQ(m.f_score, 0.0);
}

TEST(Evaluate, EmptyPredictionAndEmptyGold) {
  const auto m = evaluate(Taxonomy{}, edges({{"a", "b"}}));
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.f_score, 0.0);
  EXPECT_THROW(evaluate(edges({{"a", "b"}}), Taxonomy{}), DataError);
}

TEST(Evaluate, MatchesCanonicalSurfaces) {
  Taxonomy pred;
  pred.add("Rainbow_Trout", "FISH");
  EXPECT_EQ(evaluate(pred, edges({{"rainbow trout", "fish"}})).f_score, 1.0);
}

TEST(Evaluate, EqualSizesGiveEqualPrecisionRecallAndF) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n_terms = 3 + rng() % 8;
    const std::size_t n_edges = 1 + rng() % (n_terms * (n_terms - 1) / 2);
    const auto gold = random_taxonomy(rng, n_terms, n_edges);
    const auto pred = random_taxonomy(rng, n_terms, n_edges);
    const auto m = evaluate(pred, gold);
    EXPECT_EQ(m.n_correct, brute_force_correct(pred, gold));
    EXPECT_EQ(m.precision, m.recall);
    EXPECT_DOUBLE_EQ(m.f_score, m.precision);
  }
}

TEST(Evaluate, AlgebraicPropertiesOnRandomTaxonomies) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n_terms = 3 + rng() % 10;
    const std::size_t max_edges = n_terms * (n_terms - 1);
    const auto gold = random_taxonomy(rng, n_terms, 1 + rng() % max_edges);
    const auto pred = random_taxonomy(rng, n_terms, 1 + rng() % max_edges);
    const auto m = evaluate(pred, gold);
    EXPECT_EQ(m.n_correct, brute_force_correct(pred, gold));
    EXPECT_EQ(count_correct(pred, gold), count_correct(gold, pred));
    EXPECT_LE(std::min(m.precision, m.recall), m.f_score + 1e-15);
    EXPECT_GE(std::max(m.precision, m.recall), m.f_score - 1e-15);

    // Adding a gold edge to the prediction never lowers recall.
    Taxonomy more = pred;
    more.add(*gold.edges().begin());
    EXPECT_GE(evaluate(more, gold).recall, m.recall);
  }
}

TEST(Stats, CountsVerticesAndEdges) {
  const auto s = stats(edges({{"trout", "fish"}, {"salmon", "fish"}, {"fish", "animal"}}));
  EXPECT_EQ(s.vertices, 4u);
  EXPECT_EQ(s.edges, 3u);
  EXPECT_EQ(stats(Taxonomy{}).vertices, 0u);
}

EdgeMetrics with(double p, double r) { return {p, r, harmonic_mean(p, r), 0, 0, 0}; }

TEST(Average, IsTheUnweightedMean) {
  const std::vector<EdgeMetrics> one = {with(0.3, 0.5)};
  EXPECT_DOUBLE_EQ(average_metrics(one).f_score, one[0].f_score);
  std::vector<EdgeMetrics> two = {with(0.3, 0.3), with(0.5, 0.5)};
  EXPECT_DOUBLE_EQ(average_metrics(two).f_score, 0.4);
  EXPECT_DOUBLE_EQ(average_metrics(two).precision, 0.4);
  std::vector<EdgeMetrics> skewed = {with(1.0, 0.0), with(0.0, 1.0)};
  EXPECT_DOUBLE_EQ(average_metrics(skewed).f_score, 0.0);
  EXPECT_DOUBLE_EQ(f_of_mean_pr(skewed), 0.5);
  EXPECT_THROW(average_metrics(std::vector<EdgeMetrics>{}), DataError);
}

TEST(FormatPercent, OneDecimal) {
  EXPECT_EQ(format_percent(0.379), "37.9");
  EXPECT_EQ(format_percent(0.26449), "26.4");
  EXPECT_EQ(format_percent(0.0), "0.0");
}

TEST(MetricsJson, RoundTrips) {
  const EdgeMetrics m{0.25, 0.5, harmonic_mean(0.25, 0.5), 8, 4, 2};
  const auto back = metrics_from_json(to_json(m));
  EXPECT_EQ(back.precision, m.precision);
  EXPECT_EQ(back.recall, m.recall);
  EXPECT_EQ(back.f_score, m.f_score);
  EXPECT_EQ(back.n_correct, 2u);
  EXPECT_THROW(metrics_from_json(nlohmann::json{{"precision", 1.0}}), DataError);
}

}  // namespace
}  // namespace taxoprompt
