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

#include "taxoprompt/analysis.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <set>

#include "taxoprompt/error.hpp"
#include "taxoprompt/prompts.hpp"
#include "taxoprompt/text.hpp"

namespace taxoprompt {
namespace {

constexpr std::size_t kChunkBytes = 1 << 20;

class StreamCounter {
 public:
  explicit StreamCounter(std::span<const std::string> patterns) {
    for (const auto& p : patterns) {
      std::string n = normalize_for_counting(p);
      if (n.empty()) throw DataError("prompt-frequency patterns must not be empty");
      longest_ = std::max(longest_, n.size());
      patterns_.push_back(std::move(n));
    }
    counts_.assign(patterns_.size(), 0);
  }

  void feed(std::istream& in) {
    std::string chunk(kChunkBytes, '\0');
    while (in) {
      in.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
      const auto got = static_cast<std::size_t>(in.gcount());
      if (got == 0) break;
      for (std::size_t i = 0; i < got; ++i) push(chunk[i]);
      scan();
    }
  }

  // Matches never span two files.
  void end_file() {
    buffer_.clear();
    carry_ = 0;
    last_space_ = false;
  }

  const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  void push(char c) {
    if (text::is_space(c)) {
      if (last_space_) return;
      last_space_ = true;
      buffer_.push_back(' ');
    } else {
      last_space_ = false;
      buffer_.push_back(text::ascii_lower(c));
    }
  }

  // Counts matches that end past the carried-over prefix, then keeps the
  // last longest-1 bytes for matches that straddle the next chunk.
  void scan() {
    for (std::size_t p = 0; p < patterns_.size(); ++p) {
      const std::string& pat = patterns_[p];
      for (std::size_t pos = buffer_.find(pat); pos != std::string::npos;
           pos = buffer_.find(pat, pos + 1)) {
        if (pos + pat.size() > carry_) ++counts_[p];
      }
    }
    const std::size_t keep = std::min(buffer_.size(), longest_ - 1);
    buffer_.erase(0, buffer_.size() - keep);
    carry_ = buffer_.size();
  }

  std::vector<std::string> patterns_;
  std::vector<std::uint64_t> counts_;
  std::size_t longest_ = 1;
  std::string buffer_;
  std::size_t carry_ = 0;
  bool last_space_ = false;
};

std::vector<PromptFrequency> to_frequencies(std::span<const std::string> patterns,
                                            const std::vector<std::uint64_t>& counts) {
  std::vector<PromptFrequency> out;
  for (std::size_t i = 0; i < patterns.size(); ++i) out.push_back({patterns[i], counts[i], {}});
  return out;
}

}  // namespace

SingleTokenFilter filter_single_token(const LanguageModel& model, const Taxonomy& gold) {
  SingleTokenFilter out;
  std::map<Term, bool> single;
  auto is_single = [&](const Term& t) {
    auto it = single.find(t);
    if (it == single.end()) it = single.emplace(t, single_token_id(model, t).has_value()).first;
    return it->second;
  };
  std::set<Term> dropped;
  for (const auto& e : gold.edges()) {
    if (!is_single(e.hypernym)) dropped.insert(e.hyponym);
  }
  for (const auto& e : gold.edges()) {
    if (!dropped.count(e.hyponym)) out.gold.add(e);
  }
  out.total_terms = gold.vertices().size();
  out.dropped.assign(dropped.begin(), dropped.end());
  out.kept_terms = out.total_terms - out.dropped.size();
  out.retained_pct = out.total_terms ? 100.0 * static_cast<double>(out.kept_terms) /
                                           static_cast<double>(out.total_terms)
                                     : 0.0;
  return out;
}

SingleTokenReport single_token_report(const LanguageModel& model, const InductionConfig& config,
                                      const Terminology& terminology, const Taxonomy& gold) {
  const SingleTokenFilter filter = filter_single_token(model, gold);
  SingleTokenReport report;
  report.total_terms = filter.total_terms;
  report.retained_pct = filter.retained_pct;
  report.original = evaluate(induce(model, config, terminology).taxonomy, gold);

  Terminology kept;
  const std::set<Term> dropped(filter.dropped.begin(), filter.dropped.end());
  for (const auto& t : terminology) {
    if (!dropped.count(t)) kept.add(t);
  }
  if (dropped.empty()) {
    report.filtered = report.original;
  } else {
    if (filter.gold.empty()) {
      throw DataError("no gold hyponym has only single-token hypernyms under " +
                      model.descriptor().name);
    }
    report.filtered = evaluate(induce(model, config, kept).taxonomy, filter.gold);
  }
  report.f_original = report.original.f_score;
  report.f_filtered = report.filtered.f_score;
  report.increase_pct = 100.0 * (report.f_filtered - report.f_original);
  return report;
}

std::string normalize_for_counting(std::string_view s) {
  std::string out;
  bool last_space = false;
  for (char c : s) {
    if (text::is_space(c)) {
      if (!last_space) out.push_back(' ');
      last_space = true;
    } else {
      out.push_back(text::ascii_lower(c));
      last_space = false;
    }
  }
  return out;
}

std::vector<PromptFrequency> count_prompt_frequency(std::istream& corpus,
                                                    std::span<const std::string> patterns) {
  StreamCounter counter(patterns);
  counter.feed(corpus);
  return to_frequencies(patterns, counter.counts());
}

std::vector<PromptFrequency> count_prompt_frequency(std::span<const std::filesystem::path> corpus,
                                                    std::span<const std::string> patterns) {
  StreamCounter counter(patterns);
  for (const auto& path : corpus) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read corpus file " + path.string());
    counter.feed(in);
    if (in.bad()) throw IoError("error while reading corpus file " + path.string());
    counter.end_file();
    spdlog::debug("counted {}", path.string());
  }
  return to_frequencies(patterns, counter.counts());
}

void attach_average_f(std::vector<PromptFrequency>& frequencies,
                      std::span<const std::vector<PromptRun>> domains) {
  for (auto& freq : frequencies) {
    const std::string want(text::trim(normalize_for_counting(freq.pattern)));
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& runs : domains) {
      std::optional<double> best;
      for (const auto& run : runs) {
        std::string full = normalize_for_counting(run.pattern);
        std::string connective = full;
        try {
          connective = normalize_for_counting(PromptTemplate("run", run.pattern).connective());
        } catch (const DataError&) {
        }
        if (std::string(text::trim(full)) != want && std::string(text::trim(connective)) != want) {
          continue;
        }
        best = std::max(best.value_or(run.f_score), run.f_score);
      }
      if (best) {
        total += *best;
        ++n;
      }
    }
    freq.avg_f = n ? std::optional<double>(total / static_cast<double>(n)) : std::nullopt;
  }
}

}  // namespace taxoprompt
