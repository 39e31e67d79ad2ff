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

// Hypernym prediction and taxonomy assembly.
//
//   restrict-mlm  fill "[X] ... [MASK]" and rank only the terminology terms
//                 that are single vocabulary tokens.
//   prompt-mlm    same prompt, ranked over the whole vocabulary.
//   lm-scorer     render "[X] ... t'" for every other term t' and rank the
//                 sentences by their score.
//
// Every ranking breaks score ties by candidate surface, ascending, and never
// proposes the input term itself.

#ifndef TAXOPROMPT_INDUCTION_HPP_
#define TAXOPROMPT_INDUCTION_HPP_

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "taxoprompt/backend.hpp"
#include "taxoprompt/prompts.hpp"
#include "taxoprompt/scoring.hpp"
#include "taxoprompt/terminology.hpp"

namespace taxoprompt {

struct ScoredCandidate {
  Term candidate;
  double log_score;

  friend bool operator==(const ScoredCandidate&, const ScoredCandidate&) = default;
};

struct VocabularyMask {
  // Single-token terms with their token ids, in terminology order.
  std::vector<std::pair<Term, TokenId>> entries;
  // Terms that are not a single token.
  std::vector<Term> excluded;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

// Throws DataError when no term is a single token, since restricted
// prediction is then impossible.
VocabularyMask build_vocab_mask(const LanguageModel& model, const Terminology& terminology);

std::vector<ScoredCandidate> retrieve_restricted(const LanguageModel& model,
                                                 const PromptTemplate& tmpl, const Term& term,
                                                 const VocabularyMask& mask, std::size_t k);

// Tokens are mapped to terms by dropping subword markers and canonicalizing.
// Special tokens are never proposed, and tokens that map to the same term
// keep their best score.
std::vector<ScoredCandidate> retrieve_unrestricted(const LanguageModel& model,
                                                   const PromptTemplate& tmpl, const Term& term,
                                                   std::size_t k);

// Throws DataError for a terminology of fewer than two terms. `cache` may be
// null.
std::vector<ScoredCandidate> select_scored(const LanguageModel& model, const PromptTemplate& tmpl,
                                           const Term& term, const Terminology& terminology,
                                           std::size_t k, const ScoreOptions& options = {},
                                           ScoreCache* cache = nullptr);

// The k best of `candidates` under the shared ordering.
std::vector<ScoredCandidate> top_k(std::vector<ScoredCandidate> candidates, std::size_t k);

enum class Method { kRestrictMlm, kPromptMlm, kLmScorer };

// Accepts "restrict-mlm", "prompt-mlm", "lm-scorer" (underscores allowed);
// throws UsageError otherwise.
Method parse_method(std::string_view name);
std::string_view to_string(Method method);

struct InductionConfig {
  Method method = Method::kRestrictMlm;
  PromptTemplate tmpl = builtin_templates().at(2);
  std::size_t k = 1;
  ScoreOptions scoring;
  // 0 picks the hardware concurrency.
  unsigned threads = 0;

  // Throws UsageError for k == 0.
  void validate() const;
};

struct InductionResult {
  Taxonomy taxonomy;
  // Ranked candidates per term, in terminology order.
  std::vector<std::pair<Term, std::vector<ScoredCandidate>>> predictions;
  // Terms for which the method produced no candidate.
  std::vector<Term> skipped;
  // Terms that could not be predicted as hypernyms (restrict-mlm only).
  std::vector<Term> excluded;
};

// Throws UsageError when the method needs a masked backend and `model` is
// causal.
InductionResult induce(const LanguageModel& model, const InductionConfig& config,
                       const Terminology& terminology);

// The taxonomy induce() returns for `k`, given a result computed with a k at
// least as large.
Taxonomy truncate_to_k(const InductionResult& result, std::size_t k);

}  // namespace taxoprompt

#endif  // TAXOPROMPT_INDUCTION_HPP_
