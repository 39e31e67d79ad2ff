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

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "taxoprompt/error.hpp"
#include "testing.hpp"

namespace taxoprompt {
namespace {

using nlohmann::json;

json expected(const std::string& name) {
  return json::parse(testing::read_file(testing::data_dir() / "models" / ("expected_" + name + ".json")));
}

WordPieceTokenizer bert() {
  return WordPieceTokenizer::load(testing::tiny_model("bert") / "vocab.txt", true);
}

std::vector<SpecialToken> roberta_specials() {
  return {{"<s>"}, {"<pad>"}, {"</s>"}, {"<unk>"}, {"<mask>", true}};
}

ByteLevelBpeTokenizer roberta() {
  const auto dir = testing::tiny_model("roberta");
  return ByteLevelBpeTokenizer::load(dir / "vocab.json", dir / "merges.txt", roberta_specials(),
                                     "<unk>");
}

ByteLevelBpeTokenizer gpt2() {
  const auto dir = testing::tiny_model("gpt2");
  return ByteLevelBpeTokenizer::load(dir / "vocab.json", dir / "merges.txt", {{"<|endoftext|>"}},
                                     std::nullopt);
}

std::vector<TokenId> ids_of(const json& j) { return j.get<std::vector<TokenId>>(); }

TEST(WordPiece, MatchesReferenceIds) {
  const auto tok = bert();
  for (const auto& c : expected("bert")["tokenize"]) {
    EXPECT_EQ(tok.encode(c["text"].get<std::string>()), ids_of(c["ids"])) << c["text"];
  }
}

TEST(WordPiece, SplitsIntoContinuationPieces) {
  const auto tok = bert();
  auto pieces = [&](std::string_view text) {
    std::vector<std::string> out;
    for (TokenId id : tok.encode(text)) out.push_back(tok.vocabulary()[static_cast<std::size_t>(id)]);
    return out;
  };
  EXPECT_EQ(pieces("rainbows"), (std::vector<std::string>{"rain", "##bow", "##s"}));
  EXPECT_EQ(pieces("Zebra"), (std::vector<std::string>{"[UNK]"}));
  EXPECT_EQ(pieces("trout, fish."), (std::vector<std::string>{"trout", ",", "fish", "."}));
  EXPECT_EQ(pieces("oak [MASK]"), (std::vector<std::string>{"oak", "[MASK]"}));
  EXPECT_EQ(tok.basic_tokenize("Sea-Bass's"),
            (std::vector<std::string>{"sea", "-", "bass", "'", "s"}));
}

TEST(WordPiece, DecodeJoinsPiecesAndSurfacesStripMarkers) {
  const auto tok = bert();
  EXPECT_EQ(tok.decode(tok.encode("rainbows are fish")), "rainbows [UNK] fish");
  EXPECT_EQ(tok.token_surface(tok.id_of("##bow")), "bow");
  EXPECT_EQ(tok.token_surface(tok.id_of("trout")), "trout");
  EXPECT_TRUE(tok.is_special(tok.id_of("[CLS]")));
  EXPECT_FALSE(tok.is_special(tok.id_of("fish")));
  EXPECT_THROW(tok.id_of("zebra"), DataError);
}

TEST(ByteLevelBpe, MatchesReferenceIds) {
  const auto r = roberta();
  for (const auto& c : expected("roberta")["tokenize"]) {
    EXPECT_EQ(r.encode(c["text"].get<std::string>()), ids_of(c["ids"])) << c["text"];
  }
  const auto g = gpt2();
  for (const auto& c : expected("gpt2")["tokenize"]) {
    EXPECT_EQ(g.encode(c["text"].get<std::string>()), ids_of(c["ids"])) << c["text"];
  }
}

TEST(ByteLevelBpe, PretokenizesLikeGpt2) {
  using V = std::vector<std::string>;
  EXPECT_EQ(ByteLevelBpeTokenizer::pretokenize("zebra's 12 stripes!!  ok"),
            (V{"zebra", "'s", " 12", " stripes", "!!", " ", " ok"}));
  EXPECT_EQ(ByteLevelBpeTokenizer::pretokenize("a type\nof"), (V{"a", " type", "\n", "of"}));
  EXPECT_EQ(ByteLevelBpeTokenizer::pretokenize(""), V{});
}

TEST(ByteLevelBpe, DecodeInvertsEncode) {
  const auto g = gpt2();
  for (const char* text : {"trout is a type of fish", "Rainbow trout, is a Fish.",
                           "zebra's 12 stripes!!  ok", "  leading and trailing  ", "caf\xc3\xa9"}) {
    EXPECT_EQ(g.decode(g.encode(text)), text);
  }
}

TEST(ByteLevelBpe, MaskAbsorbsTheSpaceToItsLeft) {
  const auto r = roberta();
  const auto ids = r.encode("oak is a type of <mask>");
  EXPECT_EQ(ids.back(), r.id_of("<mask>"));
  EXPECT_EQ(r.encode("oak is a type of<mask>"), ids);
}

TEST(ByteLevelBpe, SurfaceDropsTheSpaceMarker) {
  const auto r = roberta();
  const auto ids = r.encode(" fish");
  ASSERT_EQ(ids.size(), 1u);
  EXPECT_EQ(r.vocabulary()[static_cast<std::size_t>(ids[0])], "\xc4\xa0" "fish");
  EXPECT_EQ(r.token_surface(ids[0]), "fish");
}

}  // namespace
}  // namespace taxoprompt
