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

// Diagnostics: how much of a gold taxonomy is reachable by single-token
// prediction, and how often prompt phrasings occur in a text corpus.

#ifndef TAXOPROMPT_ANALYSIS_HPP_
#define TAXOPROMPT_ANALYSIS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "taxoprompt/backend.hpp"
#include "taxoprompt/evaluation.hpp"
#include "taxoprompt/induction.hpp"
#include "taxoprompt/terminology.hpp"

namespace taxoprompt {

struct SingleTokenFilter {
  // Gold edges whose hyponym was retained.
  Taxonomy gold;
  // Gold vertices. Roots have no hypernym and always count as kept.
  std::size_t total_terms = 0;
  std::size_t kept_terms = 0;
  double retained_pct = 0.0;
  // Hyponyms with at least one multi-token hypernym, sorted.
  std::vector<Term> dropped;
};

// Keeps the terms all of whose gold hypernyms are single tokens.
SingleTokenFilter filter_single_token(const LanguageModel& model, const Taxonomy& gold);

struct SingleTokenReport {
  std::size_t total_terms = 0;
  double retained_pct = 0.0;
  EdgeMetrics original;
  EdgeMetrics filtered;
  // F-scores as ratios; increase_pct is in percentage points.
  double f_original = 0.0;
  double f_filtered = 0.0;
  double increase_pct = 0.0;
};

// Induces and evaluates twice: on `terminology` against `gold`, then on
// the terminology without the dropped hyponyms against the filtered gold.
SingleTokenReport single_token_report(const LanguageModel& model, const InductionConfig& config,
                                      const Terminology& terminology, const Taxonomy& gold);

struct PromptFrequency {
  std::string pattern;
  std::uint64_t count = 0;
  std::optional<double> avg_f;
};

// Case-insensitive, whitespace-normalized substring counts. Every start
// offset is counted, so matches may overlap. Throws DataError for an empty
// pattern.
std::vector<PromptFrequency> count_prompt_frequency(std::istream& corpus,
                                                    std::span<const std::string> patterns);
// Files are counted one after another and the counts summed. Throws IoError
// for an unreadable file.
std::vector<PromptFrequency> count_prompt_frequency(std::span<const std::filesystem::path> corpus,
                                                    std::span<const std::string> patterns);

// Lowercase, with every whitespace run replaced by one space.
std::string normalize_for_counting(std::string_view s);

// One evaluated template in one domain.
struct PromptRun {
  std::string pattern;
  double f_score = 0.0;
};

// Sets avg_f to the mean over domains of the best F among the domain's runs
// whose template matches the pattern, either in full or by the text
// between its slots. Domains without a match are left out of the mean.
void attach_average_f(std::vector<PromptFrequency>& frequencies,
                      std::span<const std::vector<PromptRun>> domains);

}  // namespace taxoprompt

#endif  // TAXOPROMPT_ANALYSIS_HPP_
