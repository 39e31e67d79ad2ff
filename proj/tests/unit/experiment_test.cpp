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

#include "taxoprompt/experiment.hpp"

#include <gtest/gtest.h>

#include "taxoprompt/error.hpp"
#include "testing.hpp"

namespace taxoprompt {
namespace {

Taxonomy fixture_gold() {
  Taxonomy gold;
  gold.add("trout", "fish");
  gold.add("salmon", "fish");
  gold.add("rainbow trout", "trout");
  gold.add("fish", "animal");
  gold.add("bird", "animal");
  return gold;
}

InductionConfig base(Method method) {
  InductionConfig c;
  c.method = method;
  c.threads = 1;
  return c;
}

TEST(Sha256, MatchesKnownDigests) {
  testing::TempDir dir;
  testing::write_file(dir / "abc", "abc");
  EXPECT_EQ(sha256_file(dir / "abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  testing::write_file(dir / "empty", "");
  EXPECT_EQ(sha256_file(dir / "empty"),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_THROW(sha256_file(dir / "missing"), IoError);
}

TEST(UtcTimestamp, HasIsoShape) {
  const auto ts = utc_timestamp();
  ASSERT_EQ(ts.size(), 20u);
  EXPECT_EQ(ts[4], '-');
  EXPECT_EQ(ts[10], 'T');
  EXPECT_EQ(ts.back(), 'Z');
}

TEST(Sweep, OneCellEqualsADirectRun) {
  const auto m = testing::masked_fixture();
  const auto terminology = testing::fixture_terminology();
  const auto gold = fixture_gold();
  for (Method method : {Method::kRestrictMlm, Method::kPromptMlm, Method::kLmScorer}) {
    const auto tmpl = testing::fixture_templates()[1];
    const auto result = sweep(m, base(method), {tmpl}, {2}, terminology, gold);
    ASSERT_EQ(result.rows.size(), 1u);
    auto config = base(method);
    config.tmpl = tmpl;
    config.k = 2;
    const auto direct = evaluate(induce(m, config, terminology).taxonomy, gold);
    EXPECT_EQ(result.rows[0].metrics.f_score, direct.f_score);
    EXPECT_EQ(result.rows[0].metrics.n_correct, direct.n_correct);
    EXPECT_EQ(result.rows[0].metrics.n_predicted, direct.n_predicted);
  }
}

TEST(Sweep, GridRowsAreSortedAndBestIsTheFirstMaximum) {
  const auto m = testing::masked_fixture();
  const auto tmpls = testing::fixture_templates();
  const std::vector<PromptTemplate> three(tmpls.begin(), tmpls.begin() + 3);
  const auto result =
      sweep(m, base(Method::kLmScorer), three, {3, 1, 3}, testing::fixture_terminology(),
            fixture_gold());
  ASSERT_EQ(result.rows.size(), 6u);
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    const auto& a = result.rows[i - 1];
    const auto& b = result.rows[i];
    EXPECT_TRUE(a.tmpl.name() < b.tmpl.name() || (a.tmpl.name() == b.tmpl.name() && a.k < b.k));
  }
  std::size_t want = 0;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    if (result.rows[i].metrics.f_score > result.rows[want].metrics.f_score) want = i;
  }
  EXPECT_EQ(result.best, want);

  const auto j = result.to_json();
  EXPECT_EQ(j["rows"].size(), 6u);
  EXPECT_EQ(j["best"]["template"], result.rows[want].tmpl.name());
  EXPECT_EQ(j["method"], "lm-scorer");
  const auto runs = prompt_runs_from_json(j);
  ASSERT_EQ(runs.size(), 6u);
  EXPECT_EQ(runs[0].pattern, result.rows[0].tmpl.pattern());
}

TEST(Sweep, TiesGoToTheFirstRow) {
  const auto m = MockBackend::uniform(ModelKind::kMasked, {"a", "b", "c", "is", "of"});
  Taxonomy gold;
  gold.add("zz", "yy");
  const PromptTemplate p("p", "[X] is of [Y]");
  const PromptTemplate q("q", "[Y] of [X]");
  const auto result = sweep(m, base(Method::kRestrictMlm), {q, p}, {1, 2},
                            Terminology({"a", "b", "c"}), gold);
  EXPECT_EQ(result.best, 0u);
  EXPECT_EQ(result.rows[0].tmpl.name(), "p");
}

TEST(Sweep, RejectsEmptyGrids) {
  const auto m = testing::masked_fixture();
  EXPECT_THROW(sweep(m, base(Method::kLmScorer), {}, {1}, testing::fixture_terminology(),
                     fixture_gold()),
               UsageError);
  EXPECT_THROW(sweep(m, base(Method::kLmScorer), testing::fixture_templates(), {0, 1},
                     testing::fixture_terminology(), fixture_gold()),
               UsageError);
}

TEST(Manifest, RecordsTheConfiguration) {
  RunManifest mf;
  mf.command = "taxoprompt induce";
  mf.config = base(Method::kLmScorer);
  mf.config.k = 3;
  mf.model_name = "fixture";
  mf.model_kind = ModelKind::kCausal;
  mf.terminology_path = "terms.txt";
  mf.terminology_sha256 = "00";
  mf.n_terms = 6;
  mf.skipped = {Term("x")};
  const auto j = mf.to_json();
  EXPECT_EQ(j["method"], "lm-scorer");
  EXPECT_EQ(j["k"], 3);
  EXPECT_EQ(j["template"]["name"], "type");
  EXPECT_EQ(j["template"]["pattern"], "[X] is a type of [Y]");
  EXPECT_EQ(j["model"]["kind"], "causal");
  EXPECT_EQ(j["terminology"]["terms"], 6);
  EXPECT_EQ(j["skipped_terms"], nlohmann::json::array({"x"}));
  EXPECT_EQ(j["version"], std::string(tool_version()));
}

TEST(Json, WritesAndReadsFiles) {
  testing::TempDir dir;
  write_json({{"a", 1}}, dir / "x.json");
  EXPECT_EQ(read_json_file(dir / "x.json")["a"], 1);
  testing::write_file(dir / "bad.json", "{");
  EXPECT_THROW(read_json_file(dir / "bad.json"), DataError);
  EXPECT_THROW(read_json_file(dir / "none.json"), IoError);
  EXPECT_THROW(prompt_runs_from_json({{"x", 1}}), DataError);
}

}  // namespace
}  // namespace taxoprompt
