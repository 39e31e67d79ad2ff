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

// Table-driven language model for offline, exact testing.
//
// The table maps (context, token) to a probability. For a masked mock the
// context is the whitespace-tokenized sentence with the mask literal at the
// predicted position; for a causal mock it is the prefix preceding the
// predicted token ("" for the first position). Contexts are compared after
// whitespace collapsing.
//
// For a given context, listed tokens receive their table probability and the
// remaining mass is split evenly over the unlisted content tokens. Special
// tokens (the mask and <unk>) always have probability zero, so a context with
// no rows is uniform over the content vocabulary.
//
// File format (UTF-8, tab-separated):
//   # kind: masked            optional, default masked
//   # mask: [MASK]            optional, default [MASK]
//   # name: my-mock           optional
//   # vocab: fish animal ...  optional; otherwise every token seen in the
//                             table, in order of first appearance
//   context<TAB>token<TAB>probability

#ifndef TAXOPROMPT_MOCK_BACKEND_HPP_
#define TAXOPROMPT_MOCK_BACKEND_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "taxoprompt/backend.hpp"

namespace taxoprompt {

inline constexpr std::string_view kMockUnknown = "<unk>";

class MockBackend final : public LanguageModel {
 public:
  struct Row {
    std::string context;
    std::string token;
    double probability;
  };

  // `vocabulary` lists content tokens; the mask literal (masked kind) and
  // <unk> are appended when absent. Throws DataError on inconsistent rows.
  MockBackend(ModelKind kind, std::vector<std::string> vocabulary, std::vector<Row> rows,
              std::string mask_literal = "[MASK]", std::string name = "mock");

  static MockBackend uniform(ModelKind kind, std::vector<std::string> vocabulary);
  static MockBackend parse(std::istream& in, std::string_view source = "<stream>");
  static MockBackend load(const std::filesystem::path& path);

  const BackendDescriptor& descriptor() const override { return descriptor_; }
  std::vector<TokenId> encode(std::string_view text) const override;
  std::string decode(std::span<const TokenId> tokens) const override;
  bool is_special(TokenId id) const override;
  std::optional<TokenId> mask_id() const override;
  std::vector<double> masked_distribution(std::span<const TokenId> tokens,
                                          std::size_t position) const override;
  std::vector<double> next_token_distribution(std::span<const TokenId> prefix) const override;

  // Probability the table assigns to `token` after/around `context`,
  // including the uniform fill for unlisted tokens.
  double probability(std::string_view context, std::string_view token) const;

  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<double> distribution(const std::string& context) const;
  std::string context_key(std::span<const TokenId> tokens) const;

  BackendDescriptor descriptor_;
  std::vector<Row> rows_;
  std::unordered_map<std::string, TokenId> ids_;
  std::vector<bool> special_;
  std::size_t n_content_ = 0;
  // context -> (token id -> probability)
  std::unordered_map<std::string, std::vector<std::pair<TokenId, double>>> table_;
};

}  // namespace taxoprompt

#endif  // TAXOPROMPT_MOCK_BACKEND_HPP_
