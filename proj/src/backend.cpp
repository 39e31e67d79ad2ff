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

#include "taxoprompt/backend.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "taxoprompt/error.hpp"

namespace taxoprompt {

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::kMasked ? "masked" : "causal";
}

void BackendDescriptor::validate() const {
  if (vocabulary.empty()) throw DataError("backend " + name + ": empty vocabulary");
  std::unordered_set<std::string_view> seen;
  for (const auto& tok : vocabulary) {
    if (!seen.insert(tok).second) {
      throw DataError("backend " + name + ": duplicate vocabulary token \"" + tok + "\"");
    }
  }
  if (kind == ModelKind::kMasked) {
    if (!mask_literal) throw DataError("masked backend " + name + " declares no mask literal");
    if (!seen.count(*mask_literal)) {
      throw DataError("backend " + name + ": mask literal " + *mask_literal +
                      " is not in the vocabulary");
    }
  } else if (mask_literal) {
    throw DataError("causal backend " + name + " must not declare a mask literal");
  }
}

const std::string& LanguageModel::token(TokenId id) const {
  return descriptor().vocabulary.at(static_cast<std::size_t>(id));
}

std::vector<double> LanguageModel::masked_distribution(std::span<const TokenId>,
                                                       std::size_t) const {
  throw UnsupportedError("backend " + descriptor().name + " (" +
                         std::string(to_string(kind())) + ") cannot fill masks");
}

std::vector<double> LanguageModel::next_token_distribution(std::span<const TokenId>) const {
  throw UnsupportedError("backend " + descriptor().name + " (" +
                         std::string(to_string(kind())) +
                         ") has no left-to-right next-token distribution");
}

std::vector<double> LanguageModel::causal_token_logprobs(std::span<const TokenId> tokens) const {
  std::vector<double> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto dist = next_token_distribution(tokens.first(i));
    out.push_back(dist.at(static_cast<std::size_t>(tokens[i])));
  }
  return out;
}

std::vector<std::string> LanguageModel::single_token_forms(const Term& term) const {
  return {term.surface()};
}

std::vector<double> mask_fill_logprobs(const LanguageModel& model, std::string_view sentence) {
  if (model.kind() != ModelKind::kMasked) {
    throw UnsupportedError("mask filling requires a masked backend; " + model.descriptor().name +
                           " is causal");
  }
  const auto tokens = model.encode(sentence);
  const TokenId mask = *model.mask_id();
  const auto n = std::count(tokens.begin(), tokens.end(), mask);
  if (n != 1) {
    throw DataError("sentence must contain the mask literal exactly once (found " +
                    std::to_string(n) + "): " + std::string(sentence));
  }
  const auto pos = static_cast<std::size_t>(
      std::find(tokens.begin(), tokens.end(), mask) - tokens.begin());
  return model.masked_distribution(tokens, pos);
}

double token_logprob_causal(const LanguageModel& model, const TokenizedSentence& sentence,
                            std::size_t position) {
  if (model.kind() != ModelKind::kCausal) {
    throw UnsupportedError("causal token scoring requires a causal backend; " +
                           model.descriptor().name + " is masked");
  }
  if (position >= sentence.tokens.size()) {
    throw std::out_of_range("token position " + std::to_string(position) +
                            " out of range for sentence of " +
                            std::to_string(sentence.tokens.size()) + " tokens");
  }
  std::span<const TokenId> all(sentence.tokens);
  auto dist = model.next_token_distribution(all.first(position));
  return dist.at(static_cast<std::size_t>(sentence.tokens[position]));
}

double token_logprob_masked(const LanguageModel& model, const TokenizedSentence& sentence,
                            std::size_t position) {
  if (model.kind() != ModelKind::kMasked) {
    throw UnsupportedError("masked token scoring requires a masked backend; " +
                           model.descriptor().name + " is causal");
  }
  if (position >= sentence.tokens.size()) {
    throw std::out_of_range("token position " + std::to_string(position) +
                            " out of range for sentence of " +
                            std::to_string(sentence.tokens.size()) + " tokens");
  }
  std::vector<TokenId> masked = sentence.tokens;
  masked[position] = *model.mask_id();
  auto dist = model.masked_distribution(masked, position);
  return dist.at(static_cast<std::size_t>(sentence.tokens[position]));
}

TokenizedSentence tokenize(const LanguageModel& model, std::string_view sentence) {
  return TokenizedSentence{model.encode(sentence), std::string(sentence)};
}

std::optional<TokenId> single_token_id(const LanguageModel& model, const Term& term) {
  for (const auto& form : model.single_token_forms(term)) {
    const auto ids = model.encode(form);
    if (ids.size() == 1 && !model.is_special(ids[0])) return ids[0];
  }
  return std::nullopt;
}

std::map<Term, std::optional<TokenId>> term_token_ids(const LanguageModel& model,
                                                      const Terminology& terminology) {
  std::map<Term, std::optional<TokenId>> out;
  for (const auto& term : terminology) out.emplace(term, single_token_id(model, term));
  return out;
}

}  // namespace taxoprompt
