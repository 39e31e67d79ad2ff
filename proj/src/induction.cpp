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

#include "taxoprompt/induction.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>

#include "taxoprompt/error.hpp"

namespace taxoprompt {
namespace {

bool ranks_before(const ScoredCandidate& a, const ScoredCandidate& b) {
  if (a.log_score != b.log_score) return a.log_score > b.log_score;
  return a.candidate.surface() < b.candidate.surface();
}

void require_masked(const LanguageModel& model, std::string_view what) {
  if (model.kind() != ModelKind::kMasked) {
    throw UsageError(std::string(what) + " needs a masked language model; " +
                     model.descriptor().name + " is causal");
  }
}

}  // namespace

std::vector<ScoredCandidate> top_k(std::vector<ScoredCandidate> candidates, std::size_t k) {
  const std::size_t n = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(n),
                    candidates.end(), ranks_before);
  candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(n), candidates.end());
  return candidates;
}

VocabularyMask build_vocab_mask(const LanguageModel& model, const Terminology& terminology) {
  VocabularyMask mask;
  for (const auto& term : terminology) {
    if (auto id = single_token_id(model, term)) {
      mask.entries.emplace_back(term, *id);
    } else {
      mask.excluded.push_back(term);
    }
  }
  if (mask.empty()) {
    throw DataError("restrict-mlm is inapplicable: no term of the terminology is a single token "
                    "in the vocabulary of " + model.descriptor().name);
  }
  return mask;
}

std::vector<ScoredCandidate> retrieve_restricted(const LanguageModel& model,
                                                 const PromptTemplate& tmpl, const Term& term,
                                                 const VocabularyMask& mask, std::size_t k) {
  require_masked(model, "restrict-mlm");
  const auto dist =
      mask_fill_logprobs(model, render_masked(tmpl, term, *model.descriptor().mask_literal));
  std::vector<ScoredCandidate> candidates;
  candidates.reserve(mask.size());
  for (const auto& [candidate, id] : mask.entries) {
    if (candidate == term) continue;
    candidates.push_back({candidate, dist.at(static_cast<std::size_t>(id))});
  }
  return top_k(std::move(candidates), k);
}

std::vector<ScoredCandidate> retrieve_unrestricted(const LanguageModel& model,
                                                   const PromptTemplate& tmpl, const Term& term,
                                                   std::size_t k) {
  require_masked(model, "prompt-mlm");
  const auto dist =
      mask_fill_logprobs(model, render_masked(tmpl, term, *model.descriptor().mask_literal));
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<ScoredCandidate> candidates;
  for (std::size_t id = 0; id < dist.size(); ++id) {
    const auto tid = static_cast<TokenId>(id);
    if (model.is_special(tid) || !std::isfinite(dist[id])) continue;
    const std::string surface = canonicalize(model.token_surface(tid));
    if (surface.empty() || surface == term.surface()) continue;
    auto [it, inserted] = slot.emplace(surface, candidates.size());
    if (inserted) {
      candidates.push_back({Term(surface), dist[id]});
    } else {
      auto& existing = candidates[it->second];
      existing.log_score = std::max(existing.log_score, dist[id]);
    }
  }
  return top_k(std::move(candidates), k);
}

std::vector<ScoredCandidate> select_scored(const LanguageModel& model, const PromptTemplate& tmpl,
                                           const Term& term, const Terminology& terminology,
                                           std::size_t k, const ScoreOptions& options,
                                           ScoreCache* cache) {
  if (terminology.size() < 2) {
    throw DataError("lm-scorer needs a terminology of at least two terms");
  }
  std::vector<ScoredCandidate> candidates;
  candidates.reserve(terminology.size());
  for (const auto& other : terminology) {
    if (other == term) continue;
    const std::string sentence = render(tmpl, term, other);
    const SentenceScore s = cache ? cache->score(sentence) : score_sentence(model, sentence);
    candidates.push_back({other, ranking_score(s, options)});
  }
  return top_k(std::move(candidates), k);
}

Method parse_method(std::string_view name) {
  std::string n(name);
  std::replace(n.begin(), n.end(), '_', '-');
  if (n == "restrict-mlm") return Method::kRestrictMlm;
  if (n == "prompt-mlm") return Method::kPromptMlm;
  if (n == "lm-scorer") return Method::kLmScorer;
  throw UsageError("unknown method \"" + std::string(name) +
                   "\" (expected restrict-mlm, prompt-mlm or lm-scorer)");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kRestrictMlm:
      return "restrict-mlm";
    case Method::kPromptMlm:
      return "prompt-mlm";
    case Method::kLmScorer:
      return "lm-scorer";
  }
  return "?";
}

void InductionConfig::validate() const {
  if (k == 0) throw UsageError("k must be at least 1");
}

InductionResult induce(const LanguageModel& model, const InductionConfig& config,
                       const Terminology& terminology) {
  config.validate();
  if (config.method != Method::kLmScorer) require_masked(model, to_string(config.method));
  if (terminology.empty()) throw DataError("cannot induce a taxonomy from an empty terminology");

  InductionResult result;
  std::optional<VocabularyMask> mask;
  if (config.method == Method::kRestrictMlm) {
    mask = build_vocab_mask(model, terminology);
    result.excluded = mask->excluded;
    if (!mask->excluded.empty()) {
      spdlog::info("restrict-mlm: {} of {} terms are not single tokens and cannot be predicted",
                   mask->excluded.size(), terminology.size());
    }
  }
  ScoreCache cache(model);

  const std::size_t n = terminology.size();
  std::vector<std::vector<ScoredCandidate>> predictions(n);
  auto predict = [&](std::size_t i) {
    const Term& term = terminology[i];
    switch (config.method) {
      case Method::kRestrictMlm:
        return retrieve_restricted(model, config.tmpl, term, *mask, config.k);
      case Method::kPromptMlm:
        return retrieve_unrestricted(model, config.tmpl, term, config.k);
      case Method::kLmScorer:
        if (n < 2) return std::vector<ScoredCandidate>{};
        return select_scored(model, config.tmpl, term, terminology, config.k, config.scoring,
                             &cache);
    }
    return std::vector<ScoredCandidate>{};
  };

  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  if (!model.descriptor().concurrent_calls) threads = 1;
  threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) predictions[i] = predict(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            predictions[i] = predict(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t i = 0; i < n; ++i) {
    result.predictions.emplace_back(terminology[i], predictions[i]);
    if (predictions[i].empty()) {
      result.skipped.push_back(terminology[i]);
      spdlog::info("{}: no candidate hypernym for \"{}\"", to_string(config.method),
                   terminology[i].surface());
      continue;
    }
    for (const auto& c : predictions[i]) result.taxonomy.add(TaxonomyEdge(terminology[i], c.candidate));
  }
  return result;
}

Taxonomy truncate_to_k(const InductionResult& result, std::size_t k) {
  Taxonomy out;
  for (const auto& [term, ranked] : result.predictions) {
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) {
      out.add(TaxonomyEdge(term, ranked[i].candidate));
    }
  }
  return out;
}

}  // namespace taxoprompt
