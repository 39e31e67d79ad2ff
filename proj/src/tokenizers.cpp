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

#include "taxoprompt/tokenizers.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>

#include "taxoprompt/error.hpp"
#include "taxoprompt/text.hpp"

namespace taxoprompt {
namespace {

using text::append_utf8;
using text::next_code_point;

std::vector<std::uint32_t> code_points(std::string_view s) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < s.size();) out.push_back(next_code_point(s, i));
  return out;
}

bool is_whitespace(std::uint32_t cp) {
  switch (cp) {
    case ' ': case '\t': case '\n': case '\r': case '\f': case '\v':
    case 0x1C: case 0x1D: case 0x1E: case 0x1F: case 0x85: case 0xA0:
    case 0x1680: case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_control(std::uint32_t cp) {
  if (cp == '\t' || cp == '\n' || cp == '\r') return false;
  return cp < 0x20 || (cp >= 0x7F && cp <= 0x9F) || cp == 0xAD || (cp >= 0x200B && cp <= 0x200F) ||
         (cp >= 0x202A && cp <= 0x202E) || (cp >= 0x2060 && cp <= 0x2064) || cp == 0xFEFF;
}

bool is_ascii_punct(std::uint32_t cp) {
  return (cp >= 33 && cp <= 47) || (cp >= 58 && cp <= 64) || (cp >= 91 && cp <= 96) ||
         (cp >= 123 && cp <= 126);
}

// Unicode punctuation and symbols outside ASCII that the pre-tokenizers
// treat as neither letters nor digits.
bool is_non_ascii_symbol(std::uint32_t cp) {
  if (cp >= 0x80 && cp <= 0x9F) return true;
  if (cp >= 0xA1 && cp <= 0xBF) {
    return cp != 0xAA && cp != 0xB5 && cp != 0xBA && cp != 0xB2 && cp != 0xB3 && cp != 0xB9 &&
           !(cp >= 0xBC && cp <= 0xBE);
  }
  return cp == 0xD7 || cp == 0xF7 || (cp >= 0x2010 && cp <= 0x2027) ||
         (cp >= 0x2030 && cp <= 0x205E) || (cp >= 0x2190 && cp <= 0x2BFF) ||
         (cp >= 0x3001 && cp <= 0x303F) || (cp >= 0xFE30 && cp <= 0xFE4F) ||
         (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0x1F000 && cp <= 0x1FAFF);
}

bool is_number(std::uint32_t cp) {
  return (cp >= '0' && cp <= '9') || cp == 0xB2 || cp == 0xB3 || cp == 0xB9 ||
         (cp >= 0xBC && cp <= 0xBE);
}

bool is_letter(std::uint32_t cp) {
  if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  return !is_whitespace(cp) && !is_non_ascii_symbol(cp) && !is_number(cp) && !is_control(cp);
}

// BERT's "punctuation": all non-alphanumeric ASCII plus Unicode P*/S* blocks.
bool is_bert_punct(std::uint32_t cp) {
  if (cp < 0x80) return is_ascii_punct(cp);
  if (cp >= 0xA1 && cp <= 0xBF) {
    return cp == 0xA1 || cp == 0xA7 || cp == 0xAB || cp == 0xB6 || cp == 0xB7 || cp == 0xBB ||
           cp == 0xBF;
  }
  return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
         (cp >= 0x3001 && cp <= 0x303F) || (cp >= 0xFF01 && cp <= 0xFF0F);
}

bool is_cjk(std::uint32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
         (cp >= 0x20000 && cp <= 0x2A6DF) || (cp >= 0x2A700 && cp <= 0x2B73F) ||
         (cp >= 0x2B740 && cp <= 0x2B81F) || (cp >= 0x2B820 && cp <= 0x2CEAF) ||
         (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x2F800 && cp <= 0x2FA1F);
}

// Lowercases and strips combining accents for Latin-1 Supplement and
// Latin Extended-A; other code points pass through unchanged.
std::uint32_t fold_latin(std::uint32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  if (cp >= 0xC0 && cp <= 0xFF) {
    // Base letters for U+00C0..U+00FF; '\0' keeps the lowercased code point.
    static constexpr char kBase[] =
        "aaaaaa" "\0" "ceeeeiiii" "\0" "nooooo" "\0\0" "uuuuy" "\0\0"
        "aaaaaa" "\0" "ceeeeiiii" "\0" "nooooo" "\0\0" "uuuuy" "\0" "y";
    static_assert(sizeof(kBase) - 1 == 64);
    const char base = kBase[cp - 0xC0];
    if (base) return static_cast<unsigned char>(base);
    if (cp <= 0xDE && cp != 0xD7) return cp + 32;
    return cp;
  }
  if (cp >= 0x100 && cp <= 0x17F) {
    static constexpr char kBase[] =
        "aaaaaa" "cccccccc" "dd" "\0\0" "eeeeeeeeee" "gggggggg" "hh" "\0\0" "iiiiiiiii"
        "\0" "\0\0" "jj" "kk" "\0" "llllll" "\0\0\0\0" "nnnnnn" "\0\0\0" "oooooo" "\0\0"
        "rrrrrr" "ssssssss" "tttt" "\0\0" "uuuuuuuuuuuu" "ww" "yyy" "zzzzzz" "\0";
    static_assert(sizeof(kBase) - 1 == 128);
    const char base = kBase[cp - 0x100];
    if (base) return static_cast<unsigned char>(base);
    // Upper/lower pairs: even upper in [0x100,0x137] and [0x14A,0x177],
    // odd upper in [0x139,0x148] and [0x179,0x17E].
    const bool even_block = (cp <= 0x137) || (cp >= 0x14A && cp <= 0x177);
    const bool odd_block = (cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E);
    if (even_block && cp % 2 == 0) return cp + 1;
    if (odd_block && cp % 2 == 1) return cp + 1;
    return cp;
  }
  return cp;
}

std::array<std::uint32_t, 256> byte_to_unicode() {
  std::array<std::uint32_t, 256> table{};
  std::array<bool, 256> direct{};
  for (int b = '!'; b <= '~'; ++b) direct[b] = true;
  for (int b = 0xA1; b <= 0xAC; ++b) direct[b] = true;
  for (int b = 0xAE; b <= 0xFF; ++b) direct[b] = true;
  std::uint32_t next = 256;
  for (int b = 0; b < 256; ++b) table[b] = direct[b] ? static_cast<std::uint32_t>(b) : next++;
  return table;
}

const std::array<std::uint32_t, 256>& byte_encoder() {
  static const auto table = byte_to_unicode();
  return table;
}

const std::unordered_map<std::uint32_t, unsigned char>& byte_decoder() {
  static const auto table = [] {
    std::unordered_map<std::uint32_t, unsigned char> m;
    const auto& enc = byte_encoder();
    for (int b = 0; b < 256; ++b) m.emplace(enc[b], static_cast<unsigned char>(b));
    return m;
  }();
  return table;
}

std::string bytes_from_bpe_string(std::string_view s) {
  std::string out;
  const auto& dec = byte_decoder();
  for (std::size_t i = 0; i < s.size();) {
    const auto cp = next_code_point(s, i);
    auto it = dec.find(cp);
    if (it != dec.end()) {
      out.push_back(static_cast<char>(it->second));
    } else {
      append_utf8(out, cp);
    }
  }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (text::read_line(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

Tokenizer::Tokenizer(std::vector<std::string> vocab, std::vector<SpecialToken> specials)
    : vocab_(std::move(vocab)), specials_(std::move(specials)) {
  if (vocab_.size() > static_cast<std::size_t>(std::numeric_limits<TokenId>::max())) {
    throw DataError("vocabulary too large");
  }
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], static_cast<TokenId>(i)).second) {
      throw DataError("duplicate vocabulary entry \"" + vocab_[i] + "\"");
    }
  }
  // Longest literal first so that overlapping literals match greedily.
  std::stable_sort(specials_.begin(), specials_.end(), [](const auto& a, const auto& b) {
    return a.literal.size() > b.literal.size();
  });
  for (const auto& s : specials_) special_ids_.push_back(id_of(s.literal));
}

std::optional<TokenId> Tokenizer::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Tokenizer::id_of(std::string_view token) const {
  auto id = find(token);
  if (!id) throw DataError("token \"" + std::string(token) + "\" is not in the vocabulary");
  return *id;
}

bool Tokenizer::is_special(TokenId id) const {
  return std::find(special_ids_.begin(), special_ids_.end(), id) != special_ids_.end();
}

std::vector<TokenId> Tokenizer::encode(std::string_view input) const {
  std::vector<TokenId> out;
  std::size_t plain_start = 0;
  for (std::size_t i = 0; i < input.size();) {
    const SpecialToken* hit = nullptr;
    std::size_t hit_index = 0;
    for (std::size_t s = 0; s < specials_.size(); ++s) {
      if (input.substr(i, specials_[s].literal.size()) == specials_[s].literal) {
        hit = &specials_[s];
        hit_index = s;
        break;
      }
    }
    if (!hit) {
      ++i;
      continue;
    }
    std::string_view plain = input.substr(plain_start, i - plain_start);
    if (hit->lstrip) {
      while (!plain.empty() && text::is_space(plain.back())) plain.remove_suffix(1);
    }
    if (!plain.empty()) encode_plain(plain, out);
    out.push_back(special_ids_[hit_index]);
    i += hit->literal.size();
    plain_start = i;
  }
  if (plain_start < input.size()) encode_plain(input.substr(plain_start), out);
  return out;
}

// --- WordPiece ---------------------------------------------------------------

WordPieceTokenizer::WordPieceTokenizer(std::vector<std::string> vocab, bool lower_case,
                                       std::vector<SpecialToken> specials, std::string unk)
    : Tokenizer(std::move(vocab), std::move(specials)), lower_case_(lower_case) {
  unk_id_ = id_of(unk);
}

std::vector<SpecialToken> WordPieceTokenizer::DefaultSpecials() {
  return {{"[PAD]"}, {"[UNK]"}, {"[CLS]"}, {"[SEP]"}, {"[MASK]"}};
}

WordPieceTokenizer WordPieceTokenizer::load(const std::filesystem::path& vocab_txt,
                                            bool lower_case) {
  auto lines = read_lines(vocab_txt);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return WordPieceTokenizer(std::move(lines), lower_case);
}

std::vector<std::string> WordPieceTokenizer::basic_tokenize(std::string_view input) const {
  // Clean, isolate CJK characters, then split on whitespace and punctuation.
  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) words.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < input.size();) {
    std::uint32_t cp = next_code_point(input, i);
    if (cp == 0 || cp == 0xFFFD || is_control(cp)) continue;
    if (is_whitespace(cp)) {
      flush();
      continue;
    }
    if (lower_case_) cp = fold_latin(cp);
    if (is_cjk(cp) || is_bert_punct(cp)) {
      flush();
      append_utf8(cur, cp);
      flush();
      continue;
    }
    append_utf8(cur, cp);
  }
  flush();
  return words;
}

void WordPieceTokenizer::wordpiece(const std::string& word, std::vector<TokenId>& out) const {
  const auto cps = code_points(word);
  if (cps.size() > 100) {
    out.push_back(unk_id_);
    return;
  }
  // Byte offsets of each code point boundary.
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < word.size();) {
    offsets.push_back(i);
    next_code_point(word, i);
  }
  offsets.push_back(word.size());
  std::vector<TokenId> pieces;
  std::size_t start = 0;
  while (start < cps.size()) {
    std::optional<TokenId> found;
    std::size_t end = cps.size();
    for (; end > start; --end) {
      std::string piece = word.substr(offsets[start], offsets[end] - offsets[start]);
      if (start > 0) piece.insert(0, "##");
      if (auto id = find(piece)) {
        found = id;
        break;
      }
    }
    if (!found) {
      out.push_back(unk_id_);
      return;
    }
    pieces.push_back(*found);
    start = end;
  }
  out.insert(out.end(), pieces.begin(), pieces.end());
}

void WordPieceTokenizer::encode_plain(std::string_view text, std::vector<TokenId>& out) const {
  for (const auto& word : basic_tokenize(text)) wordpiece(word, out);
}

std::string WordPieceTokenizer::decode(std::span<const TokenId> tokens) const {
  std::string out;
  for (TokenId id : tokens) {
    const std::string& tok = vocab_.at(static_cast<std::size_t>(id));
    if (tok.rfind("##", 0) == 0 && !out.empty()) {
      out.append(tok, 2);
    } else {
      if (!out.empty()) out.push_back(' ');
      out += tok;
    }
  }
  return out;
}

std::string WordPieceTokenizer::token_surface(TokenId id) const {
  const std::string& tok = vocab_.at(static_cast<std::size_t>(id));
  return tok.rfind("##", 0) == 0 ? tok.substr(2) : tok;
}

// --- Byte-level BPE ------------------------------------------------------------

ByteLevelBpeTokenizer::ByteLevelBpeTokenizer(
    std::vector<std::string> vocab, std::vector<std::pair<std::string, std::string>> merges,
    std::vector<SpecialToken> specials, std::optional<std::string> unk)
    : Tokenizer(std::move(vocab), std::move(specials)) {
  for (std::size_t r = 0; r < merges.size(); ++r) {
    merge_rank_.emplace(merges[r].first + ' ' + merges[r].second, r);
  }
  if (unk) unk_id_ = id_of(*unk);
}

ByteLevelBpeTokenizer ByteLevelBpeTokenizer::load(const std::filesystem::path& vocab_json,
                                                  const std::filesystem::path& merges_txt,
                                                  std::vector<SpecialToken> specials,
                                                  std::optional<std::string> unk) {
  std::ifstream in(vocab_json, std::ios::binary);
  if (!in) throw IoError("cannot open " + vocab_json.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(vocab_json.string() + ": " + e.what());
  }
  std::vector<std::string> vocab(j.size());
  std::vector<bool> filled(j.size(), false);
  for (const auto& [token, id_json] : j.items()) {
    const auto id = id_json.get<std::int64_t>();
    if (id < 0 || static_cast<std::size_t>(id) >= vocab.size() || filled[id]) {
      throw DataError(vocab_json.string() + ": token ids must be a permutation of 0..N-1");
    }
    vocab[id] = token;
    filled[id] = true;
  }
  std::vector<std::pair<std::string, std::string>> merges;
  for (const auto& line : read_lines(merges_txt)) {
    if (line.empty() || line.rfind("#version", 0) == 0) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos) {
      throw DataError(merges_txt.string() + ": malformed merge line \"" + line + "\"");
    }
    merges.emplace_back(line.substr(0, space), line.substr(space + 1));
  }
  return ByteLevelBpeTokenizer(std::move(vocab), std::move(merges), std::move(specials),
                               std::move(unk));
}

std::vector<std::string> ByteLevelBpeTokenizer::pretokenize(std::string_view input) {
  std::vector<std::uint32_t> cps;
  std::vector<std::size_t> off;
  for (std::size_t i = 0; i < input.size();) {
    off.push_back(i);
    cps.push_back(next_code_point(input, i));
  }
  off.push_back(input.size());
  const std::size_t n = cps.size();
  auto piece = [&](std::size_t a, std::size_t b) {
    return std::string(input.substr(off[a], off[b] - off[a]));
  };
  auto is_other = [](std::uint32_t cp) {
    return !is_whitespace(cp) && !is_letter(cp) && !is_number(cp);
  };
  auto run = [&](std::size_t j, auto pred) {
    while (j < n && pred(cps[j])) ++j;
    return j;
  };

  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < n) {
    const std::uint32_t c = cps[i];
    if (c == '\'' && i + 1 < n) {
      const std::uint32_t a = cps[i + 1];
      const std::uint32_t b = i + 2 < n ? cps[i + 2] : 0;
      std::size_t len = 0;
      if (a == 's' || a == 't' || a == 'm' || a == 'd') {
        len = 2;
      } else if ((a == 'r' && b == 'e') || (a == 'v' && b == 'e') || (a == 'l' && b == 'l')) {
        len = 3;
      }
      if (len) {
        out.push_back(piece(i, i + len));
        i += len;
        continue;
      }
    }
    std::size_t j = i;
    if (c == ' ' && i + 1 < n && !is_whitespace(cps[i + 1])) j = i + 1;
    const std::uint32_t head = cps[j];
    if (!is_whitespace(head)) {
      std::size_t end;
      if (is_letter(head)) {
        end = run(j, is_letter);
      } else if (is_number(head)) {
        end = run(j, is_number);
      } else {
        end = run(j, is_other);
      }
      out.push_back(piece(i, end));
      i = end;
      continue;
    }
    const std::size_t end = run(i, is_whitespace);
    if (end == n || end - i == 1) {
      out.push_back(piece(i, end));
      i = end;
    } else {
      out.push_back(piece(i, end - 1));
      i = end - 1;
    }
  }
  return out;
}

std::vector<std::string> ByteLevelBpeTokenizer::bpe(const std::string& word) const {
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < word.size();) {
    const std::size_t start = i;
    next_code_point(word, i);
    symbols.push_back(word.substr(start, i - start));
  }
  while (symbols.size() > 1) {
    std::size_t best_rank = std::numeric_limits<std::size_t>::max();
    std::size_t best_pos = 0;
    for (std::size_t k = 0; k + 1 < symbols.size(); ++k) {
      auto it = merge_rank_.find(symbols[k] + ' ' + symbols[k + 1]);
      if (it != merge_rank_.end() && it->second < best_rank) {
        best_rank = it->second;
        best_pos = k;
      }
    }
    if (best_rank == std::numeric_limits<std::size_t>::max()) break;
    const std::string first = symbols[best_pos];
    const std::string second = symbols[best_pos + 1];
    std::vector<std::string> merged;
    merged.reserve(symbols.size());
    for (std::size_t k = 0; k < symbols.size();) {
      if (k + 1 < symbols.size() && symbols[k] == first && symbols[k + 1] == second) {
        merged.push_back(first + second);
        k += 2;
      } else {
        merged.push_back(symbols[k]);
        ++k;
      }
    }
    symbols = std::move(merged);
  }
  return symbols;
}

void ByteLevelBpeTokenizer::encode_plain(std::string_view text, std::vector<TokenId>& out) const {
  const auto& enc = byte_encoder();
  for (const auto& word : pretokenize(text)) {
    std::string mapped;
    for (unsigned char b : word) append_utf8(mapped, enc[b]);
    for (const auto& sym : bpe(mapped)) {
      if (auto id = find(sym)) {
        out.push_back(*id);
      } else if (unk_id_) {
        out.push_back(*unk_id_);
      } else {
        throw DataError("byte-level BPE symbol \"" + sym + "\" missing from vocabulary");
      }
    }
  }
}

std::string ByteLevelBpeTokenizer::decode(std::span<const TokenId> tokens) const {
  std::string joined;
  for (TokenId id : tokens) {
    const std::string& tok = vocab_.at(static_cast<std::size_t>(id));
    joined += is_special(id) ? tok : bytes_from_bpe_string(tok);
  }
  return joined;
}

std::string ByteLevelBpeTokenizer::token_surface(TokenId id) const {
  const std::string& tok = vocab_.at(static_cast<std::size_t>(id));
  if (is_special(id)) return tok;
  std::string s = bytes_from_bpe_string(tok);
  while (!s.empty() && text::is_space(s.front())) s.erase(0, 1);
  return s;
}

}  // namespace taxoprompt
