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

#include "taxoprompt/scoring.hpp"

#include "taxoprompt/error.hpp"
#include "taxoprompt/text.hpp"

namespace taxoprompt {
namespace {

TokenizedSentence checked_tokenize(const LanguageModel& model, std::string_view sentence) {
  if (text::is_blank(sentence)) throw DataError("cannot score an empty sentence");
  auto tokenized = tokenize(model, sentence);
  if (tokenized.tokens.empty()) {
    throw DataError("sentence has no tokens under " + model.descriptor().name + ": " +
                    std::string(sentence));
  }
  return tokenized;
}

}  // namespace

SentenceScore score_causal(const LanguageModel& model, std::string_view sentence) {
  if (model.kind() != ModelKind::kCausal) {
    throw UnsupportedError("score_causal needs a causal backend; " + model.descriptor().name +
                           " is masked");
  }
  const auto tokenized = checked_tokenize(model, sentence);
  SentenceScore score;
  for (double lp : model.causal_token_logprobs(tokenized.tokens)) score.log_score += lp;
  score.n_tokens = tokenized.tokens.size();
  return score;
}

SentenceScore score_masked(const LanguageModel& model, std::string_view sentence) {
  if (model.kind() != ModelKind::kMasked) {
    throw UnsupportedError("score_masked needs a masked backend; " + model.descriptor().name +
                           " is causal");
  }
  const auto tokenized = checked_tokenize(model, sentence);
  SentenceScore score;
  for (std::size_t i = 0; i < tokenized.tokens.size(); ++i) {
    score.log_score += token_logprob_masked(model, tokenized, i);
  }
  score.n_tokens = tokenized.tokens.size();
  return score;
}

SentenceScore score_sentence(const LanguageModel& model, std::string_view sentence) {
  return model.kind() == ModelKind::kMasked ? score_masked(model, sentence)
                                            : score_causal(model, sentence);
}

double ranking_score(const SentenceScore& score, const ScoreOptions& options) {
  return options.length_normalize ? score.normalized() : score.log_score;
}

SentenceScore ScoreCache::score(const std::string& sentence) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = scores_.find(sentence); it != scores_.end()) {
      ++hits_;
      return it->second;
    }
  }
  // Computed outside the lock; a concurrent duplicate computes the same value.
  const SentenceScore s = score_sentence(model_, sentence);
  std::lock_guard<std::mutex> lock(mu_);
  scores_.emplace(sentence, s);
  return s;
}

std::size_t ScoreCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return scores_.size();
}

std::size_t ScoreCache::hits() const {
  std::lock_guard<std::mutex> lock(mu_);
  return hits_;
}

}  // namespace taxoprompt
