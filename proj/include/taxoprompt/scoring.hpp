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

// Whole-sentence scores. A causal model scores a sentence by the sum of
// log P(w_i | w_<i); a masked model by its pseudo-log-likelihood, the sum of
// log P(w_i | all other tokens) with one masked prediction per position.
// Scores stay in log space; the probability form is exp(log_score).

#ifndef TAXOPROMPT_SCORING_HPP_
#define TAXOPROMPT_SCORING_HPP_

#include <cstddef>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "taxoprompt/backend.hpp"

namespace taxoprompt {

struct SentenceScore {
  double log_score = 0.0;
  std::size_t n_tokens = 0;

  // Mean per-token log-probability.
  double normalized() const {
    return n_tokens ? log_score / static_cast<double>(n_tokens) : log_score;
  }
};

struct ScoreOptions {
  // Rank by the per-token mean instead of the plain sum.
  bool length_normalize = false;
};

// Both throw DataError for a sentence with no tokens and UnsupportedError
// for a backend of the other kind.
SentenceScore score_causal(const LanguageModel& model, std::string_view sentence);
SentenceScore score_masked(const LanguageModel& model, std::string_view sentence);
// Dispatches on the backend kind.
SentenceScore score_sentence(const LanguageModel& model, std::string_view sentence);

double ranking_score(const SentenceScore& score, const ScoreOptions& options);

// Thread-safe memo of sentence scores for one backend.
class ScoreCache {
 public:
  explicit ScoreCache(const LanguageModel& model) : model_(model) {}

  SentenceScore score(const std::string& sentence);
  std::size_t size() const;
  std::size_t hits() const;

 private:
  const LanguageModel& model_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, SentenceScore> scores_;
  std::size_t hits_ = 0;
};

}  // namespace taxoprompt

#endif  // TAXOPROMPT_SCORING_HPP_
