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

#include "taxoprompt/mock_backend.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "taxoprompt/error.hpp"
#include "taxoprompt/text.hpp"

namespace taxoprompt {
namespace {

constexpr double kMassTolerance = 1e-9;

double parse_probability(std::string_view field, std::string_view where) {
  std::string s(text::trim(field));
  char* end = nullptr;
  const double p = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !(p > 0.0) || p > 1.0) {
    throw DataError(std::string(where) + ": probability must be in (0, 1], got \"" + s + "\"");
  }
  return p;
}

}  // namespace

MockBackend::MockBackend(ModelKind kind, std::vector<std::string> vocabulary, std::vector<Row> rows,
                         std::string mask_literal, std::string name)
    : rows_(std::move(rows)) {
  descriptor_.name = std::move(name);
  descriptor_.kind = kind;
  descriptor_.source = "table";
  descriptor_.concurrent_calls = true;
  for (auto& tok : vocabulary) {
    if (tok == mask_literal && kind == ModelKind::kMasked) continue;
    if (tok == kMockUnknown) continue;
    if (tok.empty() || tok.find_first_of(" \t\r\n") != std::string::npos) {
      throw DataError("mock vocabulary token \"" + tok + "\" is empty or contains whitespace");
    }
    descriptor_.vocabulary.push_back(std::move(tok));
  }
  n_content_ = descriptor_.vocabulary.size();
  if (n_content_ == 0) throw DataError("mock backend needs at least one content token");
  if (kind == ModelKind::kMasked) {
    descriptor_.mask_literal = mask_literal;
    descriptor_.vocabulary.push_back(mask_literal);
  }
  descriptor_.vocabulary.emplace_back(kMockUnknown);
  descriptor_.validate();

  special_.assign(descriptor_.vocabulary.size(), false);
  for (std::size_t i = 0; i < descriptor_.vocabulary.size(); ++i) {
    ids_.emplace(descriptor_.vocabulary[i], static_cast<TokenId>(i));
    special_[i] = i >= n_content_;
  }

  std::unordered_map<std::string, double> mass;
  for (const auto& row : rows_) {
    const std::string context = text::collapse_whitespace(row.context);
    auto it = ids_.find(row.token);
    if (it == ids_.end() || special_[static_cast<std::size_t>(it->second)]) {
      throw DataError("mock table row for context \"" + context + "\" names token \"" + row.token +
                      "\" which is not a content token of the vocabulary");
    }
    if (!(row.probability > 0.0) || row.probability > 1.0) {
      throw DataError("mock table probability out of (0, 1] for context \"" + context + "\"");
    }
    if (kind == ModelKind::kMasked) {
      const auto n_masks = text::split_whitespace(context);
      if (std::count(n_masks.begin(), n_masks.end(), mask_literal) != 1) {
        throw DataError("masked mock context must contain the mask literal exactly once: \"" +
                        context + "\"");
      }
    }
    auto& entries = table_[context];
    for (const auto& [id, p] : entries) {
      if (id == it->second) {
        throw DataError("duplicate mock table row (\"" + context + "\", " + row.token + ")");
      }
    }
    entries.emplace_back(it->second, row.probability);
    mass[context] += row.probability;
  }
  for (const auto& [context, entries] : table_) {
    const double total = mass[context];
    const bool all_listed = entries.size() == n_content_;
    if (total > 1.0 + kMassTolerance) {
      throw DataError("mock table probabilities for context \"" + context + "\" sum to " +
                      std::to_string(total) + " > 1");
    }
    if (all_listed && std::abs(total - 1.0) > 1e-6) {
      throw DataError("mock table lists every token for context \"" + context +
                      "\" but probabilities sum to " + std::to_string(total));
    }
    if (!all_listed && total >= 1.0 - kMassTolerance) {
      throw DataError("mock table context \"" + context +
                      "\" leaves no probability mass for its unlisted tokens");
    }
  }
}

MockBackend MockBackend::uniform(ModelKind kind, std::vector<std::string> vocabulary) {
  return MockBackend(kind, std::move(vocabulary), {}, "[MASK]", "uniform-mock");
}

MockBackend MockBackend::parse(std::istream& in, std::string_view source) {
  ModelKind kind = ModelKind::kMasked;
  std::string mask = "[MASK]";
  std::string name = "mock";
  std::vector<std::string> vocab;
  bool vocab_declared = false;
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  auto where = [&] { return std::string(source) + ":" + std::to_string(line_no); };
  while (text::read_line(in, line)) {
    ++line_no;
    if (text::is_blank(line)) continue;
    if (line.front() == '#') {
      std::string_view body = text::trim(std::string_view(line).substr(1));
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;  // plain comment
      const std::string key(text::trim(body.substr(0, colon)));
      const std::string value(text::trim(body.substr(colon + 1)));
      if (key == "kind") {
        if (value == "masked") {
          kind = ModelKind::kMasked;
        } else if (value == "causal") {
          kind = ModelKind::kCausal;
        } else {
          throw DataError(where() + ": kind must be masked or causal");
        }
      } else if (key == "mask") {
        mask = value;
      } else if (key == "name") {
        name = value;
      } else if (key == "vocab") {
        auto toks = text::split_whitespace(value);
        vocab.insert(vocab.end(), toks.begin(), toks.end());
        vocab_declared = true;
      }
      continue;
    }
    auto fields = text::split(line, '\t');
    if (fields.size() != 3) {
      throw DataError(where() + ": expected context<TAB>token<TAB>probability");
    }
    rows.push_back(Row{std::string(fields[0]), std::string(text::trim(fields[1])),
                       parse_probability(fields[2], where())});
  }
  if (!vocab_declared) {
    std::unordered_map<std::string, bool> seen;
    auto note = [&](const std::string& tok) {
      if (tok == mask || tok == kMockUnknown) return;
      if (seen.emplace(tok, true).second) vocab.push_back(tok);
    };
    for (const auto& row : rows) {
      for (const auto& tok : text::split_whitespace(row.context)) note(tok);
      note(row.token);
    }
  }
  if (kind == ModelKind::kCausal) mask.clear();
  MockBackend backend(kind, std::move(vocab), std::move(rows), mask, name);
  backend.descriptor_.source = std::string(source);
  return backend;
}

MockBackend MockBackend::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open mock table " + path.string());
  return parse(in, path.string());
}

std::vector<TokenId> MockBackend::encode(std::string_view text) const {
  std::vector<TokenId> out;
  const TokenId unk = static_cast<TokenId>(descriptor_.vocabulary.size() - 1);
  for (const auto& tok : text::split_whitespace(text)) {
    auto it = ids_.find(tok);
    out.push_back(it == ids_.end() ? unk : it->second);
  }
  return out;
}

std::string MockBackend::decode(std::span<const TokenId> tokens) const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += token(tokens[i]);
  }
  return out;
}

bool MockBackend::is_special(TokenId id) const {
  return id < 0 || static_cast<std::size_t>(id) >= n_content_;
}

std::optional<TokenId> MockBackend::mask_id() const {
  if (descriptor_.kind != ModelKind::kMasked) return std::nullopt;
  return static_cast<TokenId>(n_content_);
}

std::string MockBackend::context_key(std::span<const TokenId> tokens) const {
  return decode(tokens);
}

std::vector<double> MockBackend::distribution(const std::string& context) const {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> probs(descriptor_.vocabulary.size(), 0.0);
  std::vector<bool> listed(n_content_, false);
  double listed_mass = 0.0;
  if (auto it = table_.find(context); it != table_.end()) {
    for (const auto& [id, p] : it->second) {
      probs[static_cast<std::size_t>(id)] = p;
      listed[static_cast<std::size_t>(id)] = true;
      listed_mass += p;
    }
  }
  std::size_t n_unlisted = 0;
  for (bool b : listed) n_unlisted += b ? 0 : 1;
  const double fill = n_unlisted ? (1.0 - listed_mass) / static_cast<double>(n_unlisted) : 0.0;
  std::vector<double> logp(probs.size(), neg_inf);
  for (std::size_t i = 0; i < n_content_; ++i) {
    logp[i] = std::log(listed[i] ? probs[i] : fill);
  }
  return logp;
}

std::vector<double> MockBackend::masked_distribution(std::span<const TokenId> tokens,
                                                     std::size_t position) const {
  if (descriptor_.kind != ModelKind::kMasked) return LanguageModel::masked_distribution(tokens, position);
  if (position >= tokens.size() || tokens[position] != *mask_id()) {
    throw DataError("masked_distribution: position does not hold the mask token");
  }
  return distribution(context_key(tokens));
}

std::vector<double> MockBackend::next_token_distribution(std::span<const TokenId> prefix) const {
  if (descriptor_.kind != ModelKind::kCausal) return LanguageModel::next_token_distribution(prefix);
  return distribution(context_key(prefix));
}

double MockBackend::probability(std::string_view context, std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return 0.0;
  return std::exp(distribution(text::collapse_whitespace(context))[static_cast<std::size_t>(it->second)]);
}

}  // namespace taxoprompt
