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

// Reference values come from the Hugging Face implementations of the same
// checkpoints (see tests/data/generate_fixtures.py). The native forward pass
// runs in float32, so comparisons allow 1e-4.

#include "taxoprompt/transformer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <nlohmann/json.hpp>

#include "taxoprompt/error.hpp"
#include "taxoprompt/model_hub.hpp"
#include "taxoprompt/safetensors.hpp"
#include "taxoprompt/scoring.hpp"
#include "testing.hpp"

namespace taxoprompt {
namespace {

using nlohmann::json;
constexpr double kTol = 1e-4;

json expected(const std::string& name) {
  return json::parse(
      testing::read_file(testing::data_dir() / "models" / ("expected_" + name + ".json")));
}

void expect_close(const std::vector<double>& got, const json& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i], want[i].get<double>(), kTol) << "index " << i;
  }
}

TEST(Transformer, BertMaskFillMatchesReference) {
  const auto m = TransformerBackend::load(testing::tiny_model("bert"));
  EXPECT_EQ(m->architecture(), Architecture::kBert);
  EXPECT_EQ(m->kind(), ModelKind::kMasked);
  for (const auto& c : expected("bert")["mask_fill"]) {
    expect_close(mask_fill_logprobs(*m, c["text"].get<std::string>()), c["logprobs"]);
  }
}

TEST(Transformer, BertPseudoLogLikelihoodMatchesReference) {
  const auto m = TransformerBackend::load(testing::tiny_model("bert"));
  for (const auto& c : expected("bert")["pll"]) {
    const auto text = c["text"].get<std::string>();
    const auto s = tokenize(*m, text);
    std::vector<double> per_token;
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      per_token.push_back(token_logprob_masked(*m, s, i));
    }
    expect_close(per_token, c["token_logprobs"]);
    EXPECT_NEAR(score_masked(*m, text).log_score, c["score"].get<double>(), kTol * 10);
  }
}

TEST(Transformer, RobertaMatchesReference) {
  const auto m = TransformerBackend::load(testing::tiny_model("roberta"));
  EXPECT_EQ(m->architecture(), Architecture::kRoberta);
  const auto e = expected("roberta");
  for (const auto& c : e["mask_fill"]) {
    expect_close(mask_fill_logprobs(*m, c["text"].get<std::string>()), c["logprobs"]);
  }
  for (const auto& c : e["pll"]) {
    EXPECT_NEAR(score_masked(*m, c["text"].get<std::string>()).log_score,
                c["score"].get<double>(), kTol * 10);
  }
}

TEST(Transformer, Gpt2MatchesReference) {
  const auto m = TransformerBackend::load(testing::tiny_model("gpt2"));
  EXPECT_EQ(m->architecture(), Architecture::kGpt2);
  EXPECT_EQ(m->kind(), ModelKind::kCausal);
  EXPECT_FALSE(m->mask_id().has_value());
  for (const auto& c : expected("gpt2")["causal"]) {
    const auto text = c["text"].get<std::string>();
    const auto ids = m->encode(text);
    expect_close(m->causal_token_logprobs(ids), c["token_logprobs"]);
    expect_close(m->next_token_distribution({}), c["first_token_logprobs"]);
    EXPECT_NEAR(score_causal(*m, text).log_score, c["score"].get<double>(), kTol * 10);
  }
}

// The single-pass causal scorer agrees with one call per prefix.
TEST(Transformer, Gpt2BatchedLogprobsMatchPrefixCalls) {
  const auto m = TransformerBackend::load(testing::tiny_model("gpt2"));
  const auto ids = m->encode("rainbow trout is a kind of fish");
  const auto batched = m->causal_token_logprobs(ids);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto dist = m->next_token_distribution(std::span(ids).first(i));
    EXPECT_NEAR(batched[i], dist[static_cast<std::size_t>(ids[i])], 1e-5);
  }
}

TEST(Transformer, DistributionsNormalize) {
  for (const char* name : {"bert", "roberta"}) {
    const auto m = TransformerBackend::load(testing::tiny_model(name));
    const std::string mask = *m->descriptor().mask_literal;
    double total = 0;
    for (double x : mask_fill_logprobs(*m, "oak is a kind of " + mask)) total += std::exp(x);
    EXPECT_NEAR(total, 1.0, 1e-6) << name;
  }
}

TEST(Transformer, SingleTokenTerms) {
  const auto b = TransformerBackend::load(testing::tiny_model("bert"));
  EXPECT_TRUE(single_token_id(*b, Term("trout")).has_value());
  EXPECT_FALSE(single_token_id(*b, Term("rainbow trout")).has_value());
  EXPECT_FALSE(single_token_id(*b, Term("zebra")).has_value());
  EXPECT_FALSE(single_token_id(*b, Term("rainbows")).has_value());
  const auto r = TransformerBackend::load(testing::tiny_model("roberta"));
  const auto fish = single_token_id(*r, Term("fish"));
  ASSERT_TRUE(fish.has_value());
  EXPECT_EQ(r->token_surface(*fish), "fish");
}

TEST(Transformer, OverlongSentenceIsADataError) {
  const auto m = TransformerBackend::load(testing::tiny_model("bert"));
  std::string text;
  for (std::size_t i = 0; i < m->max_sentence_tokens(); ++i) text += "fish ";
  EXPECT_NO_THROW(score_masked(*m, "fish fish"));
  EXPECT_THROW(mask_fill_logprobs(*m, text + "[MASK]"), DataError);
}

TEST(Transformer, LoadErrorsAreTyped) {
  testing::TempDir dir;
  EXPECT_THROW(TransformerBackend::load(dir.path()), IoError);
  testing::write_file(dir / "config.json", R"({"model_type": "t5"})");
  EXPECT_THROW(TransformerBackend::load(dir.path()), UnsupportedError);
  testing::write_file(dir / "config.json", R"({"model_type": "bert"})");
  EXPECT_THROW(TransformerBackend::load(dir.path()), IoError);
}

TEST(SafeTensors, ReadsShapesAndRejectsUnknownNames) {
  const auto f = SafeTensorsFile::open(testing::tiny_model("bert") / "model.safetensors");
  EXPECT_FALSE(f.names().empty());
  const auto names = f.names();
  const auto t = f.get(names.front());
  std::int64_t n = 1;
  for (auto d : t.shape) n *= d;
  EXPECT_EQ(static_cast<std::size_t>(n), t.data.size());
  EXPECT_THROW(f.get("no.such.tensor"), DataError);
  EXPECT_THROW(SafeTensorsFile::open("/nonexistent/model.safetensors"), IoError);
}

TEST(ModelHub, ResolvesDirectoriesCacheNamesAndMockTables) {
  testing::TempDir cache;
  std::filesystem::create_directories(cache / "org--tiny");
  for (const auto& e : std::filesystem::directory_iterator(testing::tiny_model("bert"))) {
    std::filesystem::copy(e.path(), cache / "org--tiny" / e.path().filename());
  }
  EXPECT_EQ(open_backend(testing::tiny_model("bert").string(), cache.path())->kind(),
            ModelKind::kMasked);
  EXPECT_EQ(open_backend("org/tiny", cache.path())->kind(), ModelKind::kMasked);
  testing::write_file(cache / "table.tsv", "# kind: causal\n# vocab: a b\n\ta\t0.5\n");
  EXPECT_EQ(open_backend("mock:" + (cache / "table.tsv").string(), cache.path())->kind(),
            ModelKind::kCausal);
  EXPECT_THROW(open_backend("bert-base-uncased", cache.path()), IoError);
}

TEST(ModelHub, EnvironmentVariableSetsTheCache) {
  testing::TempDir cache;
  ::setenv(std::string(kModelDirEnv).c_str(), cache.path().c_str(), 1);
  EXPECT_EQ(default_model_dir(), cache.path());
  ::unsetenv(std::string(kModelDirEnv).c_str());
  EXPECT_NE(default_model_dir(), cache.path());
}

}  // namespace
}  // namespace taxoprompt
