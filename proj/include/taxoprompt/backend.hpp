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

// Language model abstraction.
//
// A backend exposes exactly two scoring capabilities:
//   * masked models: the log-probability distribution over the vocabulary
//     at one masked position, given the rest of the sentence;
//   * causal models: the log-probability distribution of the next token
//     given a prefix.
// Everything else (sentence scoring, hypernym retrieval) is built on these.
//
// Sentences are token-id sequences *without* the sequence delimiters a
// model adds internally ([CLS]/[SEP], <s>/</s>, a BOS token); adapters add
// them inside the calls, so position i always means the i-th sentence token.
//
// All log-probabilities are natural logs in double precision.

#ifndef TAXOPROMPT_BACKEND_HPP_
#define TAXOPROMPT_BACKEND_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taxoprompt/terminology.hpp"

namespace taxoprompt {

using TokenId = std::int32_t;

enum class ModelKind { kMasked, kCausal };

std::string_view to_string(ModelKind kind);

struct BackendDescriptor {
  std::string name;
  ModelKind kind = ModelKind::kMasked;
  // Present iff kind == kMasked; always a member of `vocabulary`.
  std::optional<std::string> mask_literal;
  std::vector<std::string> vocabulary;
  // False if scoring calls must be serialized.
  bool concurrent_calls = true;
  // Free-form provenance (checkpoint directory, table file).
  std::string source;

  // Throws DataError if an invariant is violated.
  void validate() const;
};

struct TokenizedSentence {
  std::vector<TokenId> tokens;
  std::string text;
};

class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual const BackendDescriptor& descriptor() const = 0;

  ModelKind kind() const { return descriptor().kind; }
  std::size_t vocab_size() const { return descriptor().vocabulary.size(); }
  const std::string& token(TokenId id) const;

  // Deterministic. Mask and delimiter literals in the text map to their
  // special ids.
  virtual std::vector<TokenId> encode(std::string_view text) const = 0;
  virtual std::string decode(std::span<const TokenId> tokens) const = 0;

  // Ids that never denote a word (delimiters, padding, unknown, mask).
  virtual bool is_special(TokenId id) const = 0;

  // Only meaningful for masked models.
  virtual std::optional<TokenId> mask_id() const { return std::nullopt; }

  // Log-probabilities over the vocabulary at `position`, which must hold
  // the mask id. Default throws UnsupportedError.
  virtual std::vector<double> masked_distribution(std::span<const TokenId> tokens,
                                                  std::size_t position) const;

  // Log-probabilities over the vocabulary of the token following `prefix`
  // (an empty prefix gives the first-token distribution). Default throws
  // UnsupportedError.
  virtual std::vector<double> next_token_distribution(std::span<const TokenId> prefix) const;

  // log P(w_i | w_<i) for every position. The default makes one
  // next_token_distribution call per position; adapters may batch.
  virtual std::vector<double> causal_token_logprobs(std::span<const TokenId> tokens) const;

  // Surface forms to try when asking whether a term is one token. Byte-level
  // BPE vocabularies store word-initial tokens with a leading-space marker,
  // so those adapters return {" term", "term"}.
  virtual std::vector<std::string> single_token_forms(const Term& term) const;

  // Strips word-boundary / continuation markers ("##", "Ġ").
  virtual std::string token_surface(TokenId id) const { return token(id); }
};

// Throws DataError unless `sentence` contains the mask literal exactly
// once; UnsupportedError for causal backends.
std::vector<double> mask_fill_logprobs(const LanguageModel& model, std::string_view sentence);

// log P(w_i | W_<i). Throws std::out_of_range for a bad position and
// UnsupportedError for masked backends.
double token_logprob_causal(const LanguageModel& model, const TokenizedSentence& sentence,
                            std::size_t position);

// log P(w_i | W_\i): position i is replaced by the mask and the resulting
// distribution is read at the original id.
double token_logprob_masked(const LanguageModel& model, const TokenizedSentence& sentence,
                            std::size_t position);

TokenizedSentence tokenize(const LanguageModel& model, std::string_view sentence);

// A term maps to an id iff one of its single_token_forms encodes to exactly
// one non-special token. Forms are tried in order; the first hit wins.
std::map<Term, std::optional<TokenId>> term_token_ids(const LanguageModel& model,
                                                      const Terminology& terminology);
std::optional<TokenId> single_token_id(const LanguageModel& model, const Term& term);

}  // namespace taxoprompt

#endif  // TAXOPROMPT_BACKEND_HPP_
