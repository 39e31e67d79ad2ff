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

// CPU inference for BERT, RoBERTa and GPT-2 checkpoints in the Hugging Face
// directory layout: config.json, model.safetensors and the tokenizer files
// (vocab.txt, or vocab.json + merges.txt). Weights are held in float32 and
// output distributions are normalized in double precision.

#ifndef TAXOPROMPT_TRANSFORMER_HPP_
#define TAXOPROMPT_TRANSFORMER_HPP_

#include <filesystem>
#include <memory>
#include <string>

#include "taxoprompt/backend.hpp"

namespace taxoprompt {

class Tokenizer;

enum class Architecture { kBert, kRoberta, kGpt2 };

class TransformerBackend final : public LanguageModel {
 public:
  // Throws IoError for missing files, DataError for malformed ones and
  // UnsupportedError for an unknown model_type.
  static std::unique_ptr<TransformerBackend> load(const std::filesystem::path& dir,
                                                  std::string name = "");
  ~TransformerBackend() override;

  Architecture architecture() const;
  // Longest sentence (excluding delimiters) the position table allows.
  std::size_t max_sentence_tokens() const;
  const Tokenizer& tokenizer() const;

  const BackendDescriptor& descriptor() const override;
  std::vector<TokenId> encode(std::string_view text) const override;
  std::string decode(std::span<const TokenId> tokens) const override;
  bool is_special(TokenId id) const override;
  std::optional<TokenId> mask_id() const override;
  std::vector<double> masked_distribution(std::span<const TokenId> tokens,
                                          std::size_t position) const override;
  std::vector<double> next_token_distribution(std::span<const TokenId> prefix) const override;
  // One forward pass for the whole sentence.
  std::vector<double> causal_token_logprobs(std::span<const TokenId> tokens) const override;
  std::vector<std::string> single_token_forms(const Term& term) const override;
  std::string token_surface(TokenId id) const override;

 private:
  struct Impl;
  explicit TransformerBackend(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace taxoprompt

#endif  // TAXOPROMPT_TRANSFORMER_HPP_
