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

// Subword tokenizers compatible with the files shipped alongside BERT
// (vocab.txt, WordPiece) and GPT-2/RoBERTa (vocab.json + merges.txt,
// byte-level BPE) checkpoints.
//
// Unicode handling is approximate outside ASCII: letters are every non-ASCII
// code point that is not listed as whitespace or punctuation, and accent
// stripping under lowercasing covers Latin-1 Supplement and Latin
// Extended-A. Both tokenizers match the reference implementations exactly
// on ASCII text.

#ifndef TAXOPROMPT_TOKENIZERS_HPP_
#define TAXOPROMPT_TOKENIZERS_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "taxoprompt/backend.hpp"

namespace taxoprompt {

struct SpecialToken {
  std::string literal;
  // Absorb whitespace immediately to the left of the literal.
  bool lstrip = false;
};

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;

  // Special literals in `text` are matched verbatim and never split.
  std::vector<TokenId> encode(std::string_view text) const;
  virtual std::string decode(std::span<const TokenId> tokens) const = 0;
  // The token as a word: continuation/space markers removed.
  virtual std::string token_surface(TokenId id) const = 0;

  const std::vector<std::string>& vocabulary() const { return vocab_; }
  std::optional<TokenId> find(std::string_view token) const;
  // Throws DataError if `token` is not in the vocabulary.
  TokenId id_of(std::string_view token) const;
  bool is_special(TokenId id) const;
  const std::vector<SpecialToken>& special_tokens() const { return specials_; }

 protected:
  Tokenizer(std::vector<std::string> vocab, std::vector<SpecialToken> specials);

  // Encodes a span of ordinary text (no special literals).
  virtual void encode_plain(std::string_view text, std::vector<TokenId>& out) const = 0;

  std::vector<std::string> vocab_;
  std::unordered_map<std::string, TokenId> index_;
  std::vector<SpecialToken> specials_;
  std::vector<TokenId> special_ids_;
};

class WordPieceTokenizer final : public Tokenizer {
 public:
  WordPieceTokenizer(std::vector<std::string> vocab, bool lower_case,
                     std::vector<SpecialToken> specials = DefaultSpecials(),
                     std::string unk = "[UNK]");

  // One token per line.
  static WordPieceTokenizer load(const std::filesystem::path& vocab_txt, bool lower_case);
  static std::vector<SpecialToken> DefaultSpecials();

  std::string decode(std::span<const TokenId> tokens) const override;
  std::string token_surface(TokenId id) const override;

  // Whitespace/punctuation pre-tokenization, exposed for tests.
  std::vector<std::string> basic_tokenize(std::string_view text) const;

 private:
  void encode_plain(std::string_view text, std::vector<TokenId>& out) const override;
  void wordpiece(const std::string& word, std::vector<TokenId>& out) const;

  bool lower_case_;
  TokenId unk_id_;
};

class ByteLevelBpeTokenizer final : public Tokenizer {
 public:
  ByteLevelBpeTokenizer(std::vector<std::string> vocab,
                        std::vector<std::pair<std::string, std::string>> merges,
                        std::vector<SpecialToken> specials, std::optional<std::string> unk);

  static ByteLevelBpeTokenizer load(const std::filesystem::path& vocab_json,
                                    const std::filesystem::path& merges_txt,
                                    std::vector<SpecialToken> specials,
                                    std::optional<std::string> unk);

  std::string decode(std::span<const TokenId> tokens) const override;
  std::string token_surface(TokenId id) const override;

  // GPT-2 pre-tokenization split, exposed for tests.
  static std::vector<std::string> pretokenize(std::string_view text);

 private:
  void encode_plain(std::string_view text, std::vector<TokenId>& out) const override;
  std::vector<std::string> bpe(const std::string& word) const;

  std::unordered_map<std::string, std::size_t> merge_rank_;
  std::optional<TokenId> unk_id_;
};

}  // namespace taxoprompt

#endif  // TAXOPROMPT_TOKENIZERS_HPP_
