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

#include "taxoprompt/transformer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>

#include "taxoprompt/error.hpp"
#include "taxoprompt/safetensors.hpp"
#include "taxoprompt/tokenizers.hpp"

namespace taxoprompt {
namespace {

using Mat = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::RowVectorXf;
using nlohmann::json;

enum class Activation { kGeluErf, kGeluTanh, kRelu };

Activation parse_activation(const std::string& name) {
  if (name == "gelu") return Activation::kGeluErf;
  if (name == "gelu_new" || name == "gelu_pytorch_tanh" || name == "gelu_fast") {
    return Activation::kGeluTanh;
  }
  if (name == "relu") return Activation::kRelu;
  throw UnsupportedError("unsupported activation function " + name);
}

void activate(Mat& x, Activation act) {
  constexpr float kInvSqrt2 = 0.70710678118654752f;
  constexpr float kSqrt2OverPi = 0.79788456080286536f;
  switch (act) {
    case Activation::kGeluErf:
      x = x.unaryExpr([](float v) { return 0.5f * v * (1.0f + std::erf(v * kInvSqrt2)); });
      break;
    case Activation::kGeluTanh:
      x = x.unaryExpr([](float v) {
        return 0.5f * v * (1.0f + std::tanh(kSqrt2OverPi * (v + 0.044715f * v * v * v)));
      });
      break;
    case Activation::kRelu:
      x = x.cwiseMax(0.0f);
      break;
  }
}

Mat to_matrix(const Tensor& t, const std::string& name) {
  if (t.shape.size() != 2) throw DataError("tensor " + name + " is not a matrix");
  return Eigen::Map<const Mat>(t.data.data(), t.dim(0), t.dim(1));
}

Vec to_vector(const Tensor& t, const std::string& name) {
  if (t.shape.size() != 1) throw DataError("tensor " + name + " is not a vector");
  return Eigen::Map<const Vec>(t.data.data(), t.dim(0));
}

class Weights {
 public:
  Weights(const SafeTensorsFile& file, std::string prefix) : file_(file), prefix_(std::move(prefix)) {}

  // The first of `names` present under the prefix.
  std::string resolve(std::initializer_list<std::string> names) const {
    for (const auto& n : names) {
      if (file_.contains(prefix_ + n)) return prefix_ + n;
    }
    throw DataError("checkpoint is missing tensor " + prefix_ + *names.begin());
  }
  Mat matrix(std::initializer_list<std::string> names) const {
    const auto n = resolve(names);
    return to_matrix(file_.get(n), n);
  }
  Vec vector(std::initializer_list<std::string> names) const {
    const auto n = resolve(names);
    return to_vector(file_.get(n), n);
  }
  bool has(const std::string& name) const { return file_.contains(prefix_ + name); }

 private:
  const SafeTensorsFile& file_;
  std::string prefix_;
};

// y = x W + b with W stored as [in, out].
struct Linear {
  Mat w;
  Vec b;

  Mat operator()(const Mat& x) const {
    Mat y = x * w;
    y.rowwise() += b;
    return y;
  }

  // torch.nn.Linear stores [out, in].
  static Linear torch(const Weights& wt, const std::string& name) {
    Linear l{wt.matrix({name + ".weight"}).transpose(), wt.vector({name + ".bias"})};
    if (l.w.cols() != l.b.cols()) throw DataError("shape mismatch in " + name);
    return l;
  }
  // GPT-2 Conv1D stores [in, out].
  static Linear conv1d(const Weights& wt, const std::string& name) {
    Linear l{wt.matrix({name + ".weight"}), wt.vector({name + ".bias"})};
    if (l.w.cols() != l.b.cols()) throw DataError("shape mismatch in " + name);
    return l;
  }
};

struct LayerNorm {
  Vec gamma;
  Vec beta;
  float eps = 1e-12f;

  Mat operator()(const Mat& x) const {
    Mat y(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const float mean = x.row(r).mean();
      const Vec centered = x.row(r).array() - mean;
      const float var = centered.squaredNorm() / static_cast<float>(x.cols());
      y.row(r) = (centered / std::sqrt(var + eps)).cwiseProduct(gamma) + beta;
    }
    return y;
  }

  static LayerNorm load(const Weights& wt, const std::string& name, float eps) {
    return LayerNorm{wt.vector({name + ".weight", name + ".gamma"}),
                     wt.vector({name + ".bias", name + ".beta"}), eps};
  }
};

Mat attention(const Mat& q, const Mat& k, const Mat& v, int heads, bool causal) {
  const Eigen::Index n = q.rows();
  const Eigen::Index d = q.cols();
  const Eigen::Index hd = d / heads;
  const float scale = 1.0f / std::sqrt(static_cast<float>(hd));
  Mat out(n, d);
  for (int h = 0; h < heads; ++h) {
    Mat s = (q.middleCols(h * hd, hd) * k.middleCols(h * hd, hd).transpose()) * scale;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index visible = causal ? i + 1 : n;
      const float mx = s.row(i).head(visible).maxCoeff();
      float total = 0.0f;
      for (Eigen::Index j = 0; j < n; ++j) {
        const float e = j < visible ? std::exp(s(i, j) - mx) : 0.0f;
        s(i, j) = e;
        total += e;
      }
      s.row(i) /= total;
    }
    out.middleCols(h * hd, hd) = s * v.middleCols(h * hd, hd);
  }
  return out;
}

std::vector<double> log_softmax(const Eigen::VectorXf& logits) {
  double mx = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < logits.size(); ++i) mx = std::max(mx, double{logits[i]});
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) total += std::exp(double{logits[i]} - mx);
  const double log_z = mx + std::log(total);
  std::vector<double> out(static_cast<std::size_t>(logits.size()));
  for (Eigen::Index i = 0; i < logits.size(); ++i) out[i] = double{logits[i]} - log_z;
  return out;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

template <typename T>
T config_value(const json& config, std::initializer_list<const char*> keys, T fallback) {
  for (const char* key : keys) {
    if (config.contains(key) && !config[key].is_null()) return config[key].get<T>();
  }
  return fallback;
}

template <typename T>
T required(const json& config, std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    if (config.contains(key) && !config[key].is_null()) return config[key].get<T>();
  }
  throw DataError(std::string("config.json lacks ") + *keys.begin());
}

// --- BERT / RoBERTa ----------------------------------------------------------

struct EncoderLayer {
  Linear query, key, value, attn_out, inter, out;
  LayerNorm attn_norm, out_norm;
};

class Encoder {
 public:
  Encoder(const SafeTensorsFile& file, const json& config, Architecture arch) {
    const std::string base = arch == Architecture::kBert ? "bert." : "roberta.";
    const std::string prefix = file.contains(base + "embeddings.word_embeddings.weight") ? base : "";
    Weights wt(file, prefix);
    Weights root(file, "");
    const auto eps = config_value<float>(config, {"layer_norm_eps"},
                                         arch == Architecture::kBert ? 1e-12f : 1e-5f);
    heads_ = required<int>(config, {"num_attention_heads"});
    act_ = parse_activation(config_value<std::string>(config, {"hidden_act"}, "gelu"));
    position_offset_ =
        arch == Architecture::kRoberta ? config_value<int>(config, {"pad_token_id"}, 1) + 1 : 0;

    word_ = wt.matrix({"embeddings.word_embeddings.weight"});
    position_ = wt.matrix({"embeddings.position_embeddings.weight"});
    type0_ = wt.matrix({"embeddings.token_type_embeddings.weight"}).row(0);
    embed_norm_ = LayerNorm::load(wt, "embeddings.LayerNorm", eps);
    if (word_.cols() % heads_ != 0) throw DataError("hidden size not divisible by head count");

    const int layers = required<int>(config, {"num_hidden_layers"});
    for (int i = 0; i < layers; ++i) {
      const std::string p = "encoder.layer." + std::to_string(i) + ".";
      layers_.push_back(EncoderLayer{
          Linear::torch(wt, p + "attention.self.query"), Linear::torch(wt, p + "attention.self.key"),
          Linear::torch(wt, p + "attention.self.value"),
          Linear::torch(wt, p + "attention.output.dense"),
          Linear::torch(wt, p + "intermediate.dense"), Linear::torch(wt, p + "output.dense"),
          LayerNorm::load(wt, p + "attention.output.LayerNorm", eps),
          LayerNorm::load(wt, p + "output.LayerNorm", eps)});
    }

    if (arch == Architecture::kBert) {
      head_dense_ = Linear::torch(root, "cls.predictions.transform.dense");
      head_norm_ = LayerNorm::load(root, "cls.predictions.transform.LayerNorm", eps);
      decoder_ = root.has("cls.predictions.decoder.weight")
                     ? root.matrix({"cls.predictions.decoder.weight"})
                     : word_;
      decoder_bias_ = root.vector({"cls.predictions.bias", "cls.predictions.decoder.bias"});
    } else {
      head_dense_ = Linear::torch(root, "lm_head.dense");
      head_norm_ = LayerNorm::load(root, "lm_head.layer_norm", eps);
      decoder_ = root.has("lm_head.decoder.weight") ? root.matrix({"lm_head.decoder.weight"}) : word_;
      decoder_bias_ = root.vector({"lm_head.bias", "lm_head.decoder.bias"});
    }
    if (decoder_.rows() != decoder_bias_.cols() || decoder_.cols() != word_.cols()) {
      throw DataError("masked LM head shape does not match the embeddings");
    }
  }

  std::size_t vocab_size() const { return static_cast<std::size_t>(decoder_.rows()); }
  // Positions available to the sequence including the two delimiters.
  std::size_t max_positions() const {
    return static_cast<std::size_t>(position_.rows()) - static_cast<std::size_t>(position_offset_);
  }

  // `ids` includes the delimiters.
  std::vector<double> masked_logprobs(const std::vector<TokenId>& ids, std::size_t position) const {
    const auto n = static_cast<Eigen::Index>(ids.size());
    Mat x(n, word_.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      x.row(i) = word_.row(ids[i]) + position_.row(i + position_offset_) + type0_;
    }
    x = embed_norm_(x);
    for (const auto& l : layers_) {
      Mat a = l.attn_out(attention(l.query(x), l.key(x), l.value(x), heads_, false));
      x = l.attn_norm(x + a);
      Mat h = l.inter(x);
      activate(h, act_);
      x = l.out_norm(x + l.out(h));
    }
    Mat h = head_dense_(x.row(static_cast<Eigen::Index>(position)));
    activate(h, act_);
    h = head_norm_(h);
    Eigen::VectorXf logits = decoder_ * h.row(0).transpose() + decoder_bias_.transpose();
    return log_softmax(logits);
  }

 private:
  int heads_ = 1;
  Activation act_ = Activation::kGeluErf;
  int position_offset_ = 0;
  Mat word_, position_;
  Vec type0_;
  LayerNorm embed_norm_;
  std::vector<EncoderLayer> layers_;
  Linear head_dense_;
  LayerNorm head_norm_;
  Mat decoder_;
  Vec decoder_bias_;
};

// --- GPT-2 -------------------------------------------------------------------

struct DecoderLayer {
  LayerNorm ln1, ln2;
  Linear c_attn, attn_proj, c_fc, mlp_proj;
};

class Decoder {
 public:
  Decoder(const SafeTensorsFile& file, const json& config) {
    const std::string prefix = file.contains("transformer.wte.weight") ? "transformer." : "";
    Weights wt(file, prefix);
    Weights root(file, "");
    const auto eps = config_value<float>(config, {"layer_norm_epsilon"}, 1e-5f);
    heads_ = required<int>(config, {"n_head"});
    act_ = parse_activation(config_value<std::string>(config, {"activation_function"}, "gelu_new"));
    wte_ = wt.matrix({"wte.weight"});
    wpe_ = wt.matrix({"wpe.weight"});
    if (wte_.cols() % heads_ != 0) throw DataError("hidden size not divisible by head count");
    const int layers = required<int>(config, {"n_layer"});
    for (int i = 0; i < layers; ++i) {
      const std::string p = "h." + std::to_string(i) + ".";
      layers_.push_back(DecoderLayer{
          LayerNorm::load(wt, p + "ln_1", eps), LayerNorm::load(wt, p + "ln_2", eps),
          Linear::conv1d(wt, p + "attn.c_attn"), Linear::conv1d(wt, p + "attn.c_proj"),
          Linear::conv1d(wt, p + "mlp.c_fc"), Linear::conv1d(wt, p + "mlp.c_proj")});
    }
    ln_f_ = LayerNorm::load(wt, "ln_f", eps);
    lm_head_ = root.has("lm_head.weight") ? root.matrix({"lm_head.weight"}) : wte_;
  }

  std::size_t vocab_size() const { return static_cast<std::size_t>(lm_head_.rows()); }
  std::size_t max_positions() const { return static_cast<std::size_t>(wpe_.rows()); }

  // Final hidden states, one row per input id.
  Mat hidden(const std::vector<TokenId>& ids) const {
    const auto n = static_cast<Eigen::Index>(ids.size());
    const Eigen::Index d = wte_.cols();
    Mat x(n, d);
    for (Eigen::Index i = 0; i < n; ++i) x.row(i) = wte_.row(ids[i]) + wpe_.row(i);
    for (const auto& l : layers_) {
      Mat qkv = l.c_attn(l.ln1(x));
      Mat a = attention(qkv.middleCols(0, d), qkv.middleCols(d, d), qkv.middleCols(2 * d, d),
                        heads_, true);
      x += l.attn_proj(a);
      Mat h = l.c_fc(l.ln2(x));
      activate(h, act_);
      x += l.mlp_proj(h);
    }
    return ln_f_(x);
  }

  std::vector<double> logprobs(const Mat& h, Eigen::Index row) const {
    Eigen::VectorXf logits = lm_head_ * h.row(row).transpose();
    return log_softmax(logits);
  }

 private:
  int heads_ = 1;
  Activation act_ = Activation::kGeluTanh;
  Mat wte_, wpe_, lm_head_;
  std::vector<DecoderLayer> layers_;
  LayerNorm ln_f_;
};

bool bracketed(const std::string& tok) {
  return tok.size() > 2 && tok.front() == '[' && tok.back() == ']';
}

}  // namespace

struct TransformerBackend::Impl {
  Architecture arch = Architecture::kBert;
  BackendDescriptor descriptor;
  std::unique_ptr<Tokenizer> tokenizer;
  std::unique_ptr<Encoder> encoder;
  std::unique_ptr<Decoder> decoder;
  std::vector<bool> special;
  std::optional<TokenId> mask;
  // Delimiters around a masked sentence, or the BOS for a causal one.
  TokenId open = 0;
  TokenId close = 0;
  std::size_t max_sentence = 0;

  void check_length(std::size_t n) const {
    if (n > max_sentence) {
      throw DataError(descriptor.name + ": sentence of " + std::to_string(n) +
                      " tokens exceeds the model limit of " + std::to_string(max_sentence));
    }
  }
};

TransformerBackend::TransformerBackend(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
TransformerBackend::~TransformerBackend() = default;

std::unique_ptr<TransformerBackend> TransformerBackend::load(const std::filesystem::path& dir,
                                                             std::string name) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("model directory " + dir.string() + " does not exist");
  const json config = read_json(dir / "config.json");
  const auto model_type = config_value<std::string>(config, {"model_type"}, "");
  auto impl = std::make_unique<Impl>();
  if (model_type == "bert") {
    impl->arch = Architecture::kBert;
  } else if (model_type == "roberta") {
    impl->arch = Architecture::kRoberta;
  } else if (model_type == "gpt2") {
    impl->arch = Architecture::kGpt2;
  } else {
    throw UnsupportedError("model_type \"" + model_type + "\" in " + dir.string() +
                           " is not supported (bert, roberta, gpt2)");
  }
  json tok_config = json::object();
  if (fs::exists(dir / "tokenizer_config.json")) tok_config = read_json(dir / "tokenizer_config.json");

  const auto weights_path = dir / "model.safetensors";
  if (!fs::exists(weights_path)) {
    throw IoError(dir.string() + " has no model.safetensors (other checkpoint formats are not read)");
  }
  const auto file = SafeTensorsFile::open(weights_path);

  std::size_t model_vocab = 0;
  std::size_t positions = 0;
  switch (impl->arch) {
    case Architecture::kBert: {
      const bool lower = config_value<bool>(tok_config, {"do_lower_case"}, true);
      impl->tokenizer = std::make_unique<WordPieceTokenizer>(
          WordPieceTokenizer::load(dir / "vocab.txt", lower));
      impl->encoder = std::make_unique<Encoder>(file, config, impl->arch);
      impl->mask = impl->tokenizer->id_of("[MASK]");
      impl->open = impl->tokenizer->id_of("[CLS]");
      impl->close = impl->tokenizer->id_of("[SEP]");
      model_vocab = impl->encoder->vocab_size();
      positions = impl->encoder->max_positions() - 2;
      break;
    }
    case Architecture::kRoberta: {
      impl->tokenizer = std::make_unique<ByteLevelBpeTokenizer>(ByteLevelBpeTokenizer::load(
          dir / "vocab.json", dir / "merges.txt",
          {{"<s>"}, {"<pad>"}, {"</s>"}, {"<unk>"}, {"<mask>", true}}, "<unk>"));
      impl->encoder = std::make_unique<Encoder>(file, config, impl->arch);
      impl->mask = impl->tokenizer->id_of("<mask>");
      impl->open = impl->tokenizer->id_of("<s>");
      impl->close = impl->tokenizer->id_of("</s>");
      model_vocab = impl->encoder->vocab_size();
      positions = impl->encoder->max_positions() - 2;
      break;
    }
    case Architecture::kGpt2: {
      impl->tokenizer = std::make_unique<ByteLevelBpeTokenizer>(ByteLevelBpeTokenizer::load(
          dir / "vocab.json", dir / "merges.txt", {{"<|endoftext|>"}}, std::nullopt));
      impl->decoder = std::make_unique<Decoder>(file, config);
      const auto bos = config_value<TokenId>(config, {"bos_token_id"},
                                             impl->tokenizer->id_of("<|endoftext|>"));
      impl->open = impl->close = bos;
      model_vocab = impl->decoder->vocab_size();
      positions = impl->decoder->max_positions() - 1;
      break;
    }
  }
  impl->max_sentence = positions;

  const auto& tok_vocab = impl->tokenizer->vocabulary();
  if (model_vocab < tok_vocab.size()) {
    throw DataError(dir.string() + ": tokenizer has " + std::to_string(tok_vocab.size()) +
                    " tokens but the model only " + std::to_string(model_vocab));
  }
  auto& d = impl->descriptor;
  d.name = name.empty() ? dir.filename().string() : std::move(name);
  d.kind = impl->arch == Architecture::kGpt2 ? ModelKind::kCausal : ModelKind::kMasked;
  d.source = fs::absolute(dir).lexically_normal().string();
  d.concurrent_calls = true;
  d.vocabulary = tok_vocab;
  for (std::size_t i = tok_vocab.size(); i < model_vocab; ++i) {
    d.vocabulary.push_back("<extra_" + std::to_string(i) + ">");
  }
  if (impl->mask) d.mask_literal = tok_vocab[static_cast<std::size_t>(*impl->mask)];
  d.validate();

  impl->special.assign(d.vocabulary.size(), false);
  for (std::size_t i = 0; i < d.vocabulary.size(); ++i) {
    const auto id = static_cast<TokenId>(i);
    impl->special[i] = i >= tok_vocab.size() || impl->tokenizer->is_special(id) ||
                       (impl->arch == Architecture::kBert && bracketed(tok_vocab[i]));
  }
  return std::unique_ptr<TransformerBackend>(new TransformerBackend(std::move(impl)));
}

Architecture TransformerBackend::architecture() const { return impl_->arch; }
std::size_t TransformerBackend::max_sentence_tokens() const { return impl_->max_sentence; }
const Tokenizer& TransformerBackend::tokenizer() const { return *impl_->tokenizer; }
const BackendDescriptor& TransformerBackend::descriptor() const { return impl_->descriptor; }

std::vector<TokenId> TransformerBackend::encode(std::string_view text) const {
  return impl_->tokenizer->encode(text);
}

std::string TransformerBackend::decode(std::span<const TokenId> tokens) const {
  return impl_->tokenizer->decode(tokens);
}

bool TransformerBackend::is_special(TokenId id) const {
  return id < 0 || static_cast<std::size_t>(id) >= impl_->special.size() ||
         impl_->special[static_cast<std::size_t>(id)];
}

std::optional<TokenId> TransformerBackend::mask_id() const { return impl_->mask; }

std::vector<double> TransformerBackend::masked_distribution(std::span<const TokenId> tokens,
                                                            std::size_t position) const {
  if (!impl_->encoder) return LanguageModel::masked_distribution(tokens, position);
  if (position >= tokens.size() || tokens[position] != *impl_->mask) {
    throw DataError("masked_distribution: position does not hold the mask token");
  }
  impl_->check_length(tokens.size());
  std::vector<TokenId> ids;
  ids.reserve(tokens.size() + 2);
  ids.push_back(impl_->open);
  for (TokenId t : tokens) {
    if (t < 0 || static_cast<std::size_t>(t) >= vocab_size()) throw DataError("token id out of range");
    ids.push_back(t);
  }
  ids.push_back(impl_->close);
  return impl_->encoder->masked_logprobs(ids, position + 1);
}

std::vector<double> TransformerBackend::next_token_distribution(
    std::span<const TokenId> prefix) const {
  if (!impl_->decoder) return LanguageModel::next_token_distribution(prefix);
  impl_->check_length(prefix.size() + 1);
  std::vector<TokenId> ids{impl_->open};
  ids.insert(ids.end(), prefix.begin(), prefix.end());
  const Mat h = impl_->decoder->hidden(ids);
  return impl_->decoder->logprobs(h, h.rows() - 1);
}

std::vector<double> TransformerBackend::causal_token_logprobs(
    std::span<const TokenId> tokens) const {
  if (!impl_->decoder) return LanguageModel::causal_token_logprobs(tokens);
  if (tokens.empty()) return {};
  impl_->check_length(tokens.size());
  std::vector<TokenId> ids{impl_->open};
  ids.insert(ids.end(), tokens.begin(), tokens.end() - 1);
  const Mat h = impl_->decoder->hidden(ids);
  std::vector<double> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.push_back(impl_->decoder->logprobs(h, static_cast<Eigen::Index>(i))
                      .at(static_cast<std::size_t>(tokens[i])));
  }
  return out;
}

std::vector<std::string> TransformerBackend::single_token_forms(const Term& term) const {
  if (impl_->arch == Architecture::kBert) return {term.surface()};
  return {" " + term.surface(), term.surface()};
}

std::string TransformerBackend::token_surface(TokenId id) const {
  if (static_cast<std::size_t>(id) >= impl_->tokenizer->vocabulary().size()) return token(id);
  return impl_->tokenizer->token_surface(id);
}

}  // namespace taxoprompt
