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

#include "taxoprompt/terminology.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "taxoprompt/error.hpp"
#include "testing.hpp"

namespace taxoprompt {
namespace {

using ::taxoprompt::testing::TempDir;

TEST(Canonicalize, LowercasesAndCollapsesSeparators) {
  EXPECT_EQ(canonicalize("Physics"), "physics");
  EXPECT_EQ(canonicalize("  Rainbow__Trout\t"), "rainbow trout");
  EXPECT_EQ(canonicalize("sea_bass"), "sea bass");
  EXPECT_EQ(canonicalize("a \n b"), "a b");
  EXPECT_EQ(canonicalize("___"), "");
}

TEST(Canonicalize, IsIdempotentOnRandomStrings) {
  std::mt19937 rng(3);
  const std::string alphabet = "aBz_ \t\nQ-'.9";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    const int n = static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
    const auto once = canonicalize(s);
    EXPECT_EQ(canonicalize(once), once) << "input: \"" << s << "\"";
    EXPECT_EQ(once.find("  "), std::string::npos);
    EXPECT_EQ(once.find('_'), std::string::npos);
  }
}

TEST(Term, EqualityFollowsCanonicalForm) {
  EXPECT_EQ(Term("Physics"), Term("physics"));
  EXPECT_EQ(Term("rainbow_trout"), Term("Rainbow Trout"));
  EXPECT_NE(Term("trout"), Term("rainbow trout"));
  EXPECT_THROW(Term(" _ "), DataError);
}

TEST(Terminology, CollapsesDuplicatesKeepingFirstPosition) {
  std::istringstream in("Physics\nscience\n\nphysics\nsea_bass\nsea bass\n");
  auto load = parse_terminology(in, TerminologyFormat::kPlain);
  ASSERT_EQ(load.terminology.size(), 3u);
  EXPECT_EQ(load.collapsed_duplicates, 2u);
  EXPECT_EQ(load.terminology[0].surface(), "physics");
  EXPECT_EQ(load.terminology[1].surface(), "science");
  EXPECT_EQ(load.terminology[2].surface(), "sea bass");
  EXPECT_EQ(load.terminology.index_of(Term("SCIENCE")), 1u);
  EXPECT_FALSE(load.terminology.index_of(Term("chemistry")).has_value());
}

TEST(Terminology, ReadsIdTermColumns) {
  std::istringstream in("1\tfish\n2\tRainbow Trout\n");
  auto load = parse_terminology(in, TerminologyFormat::kTsvIdTerm);
  ASSERT_EQ(load.terminology.size(), 2u);
  EXPECT_TRUE(load.terminology.contains(Term("rainbow trout")));
}

TEST(Terminology, RejectsEmptyAndMalformedInput) {
  std::istringstream empty("\n  \n");
  EXPECT_THROW(parse_terminology(empty, TerminologyFormat::kPlain), DataError);
  std::istringstream one_column("fish\n");
  EXPECT_THROW(parse_terminology(one_column, TerminologyFormat::kTsvIdTerm), DataError);
  EXPECT_THROW(load_terminology("/nonexistent/terms.txt"), IoError);
  EXPECT_THROW(parse_terminology_format("csv"), UsageError);
  EXPECT_EQ(parse_terminology_format("tsv-id-term"), TerminologyFormat::kTsvIdTerm);
}

TEST(Taxonomy, VerticesAreEdgeEndpoints) {
  std::istringstream in("trout\tfish\nfish\tanimal\n");
  auto load = parse_taxonomy(in);
  EXPECT_EQ(load.taxonomy.size(), 2u);
  EXPECT_EQ(load.taxonomy.vertices().size(), 3u);
  EXPECT_EQ(load.taxonomy.hypernyms_of(Term("trout")), std::vector<Term>{Term("fish")});
  EXPECT_TRUE(load.taxonomy.hypernyms_of(Term("animal")).empty());
}

TEST(Taxonomy, AcceptsLeadingIdColumnAndCollapsesDuplicates) {
  std::istringstream in("1\ttrout\tfish\n2\tTrout\tFish\n3\tsalmon\tfish\n");
  auto load = parse_taxonomy(in);
  EXPECT_EQ(load.taxonomy.size(), 2u);
  EXPECT_EQ(load.collapsed_duplicates, 1u);
}

TEST(Taxonomy, SelfLoopErrorNamesTheRows) {
  std::istringstream in("fish\tFish\ntrout\tfish\nbird\tbird\n");
  try {
    parse_taxonomy(in, "gold.tsv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("gold.tsv"), std::string::npos) << msg;
    EXPECT_NE(msg.find("1, 3"), std::string::npos) << msg;
  }
  EXPECT_THROW(TaxonomyEdge(Term("a"), Term("A")), DataError);
}

TEST(Taxonomy, WrongColumnCountNamesTheRow) {
  std::istringstream in("trout\tfish\njust-one-column\n");
  try {
    parse_taxonomy(in, "gold.tsv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
}

TEST(Taxonomy, EmptyTaxonomyWritesEmptyFile) {
  TempDir dir;
  write_taxonomy(Taxonomy{}, dir / "empty.tsv");
  EXPECT_EQ(testing::read_file(dir / "empty.tsv"), "");
  EXPECT_TRUE(load_taxonomy(dir / "empty.tsv").taxonomy.empty());
}

TEST(Taxonomy, WritesSortedEdgesOnePerLine) {
  Taxonomy t;
  t.add("salmon", "fish");
  t.add("fish", "animal");
  std::ostringstream out;
  write_taxonomy(t, out);
  EXPECT_EQ(out.str(), "fish\tanimal\nsalmon\tfish\n");
}

Taxonomy random_taxonomy(std::mt19937& rng, std::size_t n_vertices, std::size_t n_edges) {
  Taxonomy t;
  const char* syllables[] = {"ka", "lo", "mi", "re", "su", "to"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n_vertices; ++i) {
    std::string name = std::string(syllables[i % 6]) + std::to_string(i);
    if (rng() % 4 == 0) name += " " + std::string(syllables[rng() % 6]);
    names.push_back(name);
  }
  for (std::size_t e = 0; e < n_edges; ++e) {
    const auto a = rng() % n_vertices;
    const auto b = rng() % n_vertices;
    if (a != b) t.add(names[a], names[b]);
  }
  return t;
}

TEST(Taxonomy, RoundTripsThroughTsvAndBoundsVertices) {
  std::mt19937 rng(17);
  TempDir dir;
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_taxonomy(rng, 3 + rng() % 30, rng() % 60);
    write_taxonomy(t, dir / "t.tsv");
    const auto back = load_taxonomy(dir / "t.tsv").taxonomy;
    EXPECT_EQ(back, t);
    EXPECT_LE(t.vertices().size(), 2 * t.size());
    std::set<Term> endpoints;
    for (const auto& e : t.edges()) {
      endpoints.insert(e.hyponym);
      endpoints.insert(e.hypernym);
    }
    EXPECT_EQ(endpoints, t.vertices());
  }
}

TEST(Taxonomy, LoadsSmokeGold) {
  auto load = load_taxonomy(testing::data_dir() / "smoke" / "gold.tsv");
  EXPECT_EQ(load.taxonomy.size(), 17u);
  EXPECT_EQ(load.taxonomy.vertices().size(), 20u);
  auto terms = load_terminology(testing::data_dir() / "smoke" / "terms.txt");
  for (const auto& v : load.taxonomy.vertices()) EXPECT_TRUE(terms.terminology.contains(v)) << v;
}

}  // namespace
}  // namespace taxoprompt
