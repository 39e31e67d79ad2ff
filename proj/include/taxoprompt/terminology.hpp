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

// Terms, terminologies and taxonomies, plus their on-disk formats.
//
// Every term is stored in canonical form: ASCII-lowercased, underscores
// mapped to spaces, whitespace runs collapsed to one space, trimmed. Two
// surfaces name the same term iff their canonical forms are equal.

#ifndef TAXOPROMPT_TERMINOLOGY_HPP_
#define TAXOPROMPT_TERMINOLOGY_HPP_

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taxoprompt {

// Idempotent: canonicalize(canonicalize(s)) == canonicalize(s).
std::string canonicalize(std::string_view surface);

class Term {
 public:
  // Throws DataError when the canonical form is empty.
  explicit Term(std::string_view surface);

  const std::string& surface() const { return surface_; }

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;

 private:
  std::string surface_;
};

std::ostream& operator<<(std::ostream& os, const Term& term);

// Insertion-ordered set of terms.
class Terminology {
 public:
  Terminology() = default;
  explicit Terminology(const std::vector<std::string>& surfaces);

  // Returns false if an equal term is already present.
  bool add(const Term& term);

  bool contains(const Term& term) const { return index_.count(term.surface()) != 0; }
  std::optional<std::size_t> index_of(const Term& term) const;

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const Term& operator[](std::size_t i) const { return terms_[i]; }
  const std::vector<Term>& terms() const { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

 private:
  std::vector<Term> terms_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct TaxonomyEdge {
  Term hyponym;
  Term hypernym;

  // Throws DataError on a self-loop.
  TaxonomyEdge(Term hypo, Term hyper);

  friend auto operator<=>(const TaxonomyEdge&, const TaxonomyEdge&) = default;
  friend bool operator==(const TaxonomyEdge&, const TaxonomyEdge&) = default;
};

// Set of directed is-a edges. Vertices are exactly the edge endpoints.
class Taxonomy {
 public:
  Taxonomy() = default;

  // Returns false if the edge was already present.
  bool add(const TaxonomyEdge& edge);
  bool add(std::string_view hyponym, std::string_view hypernym);

  bool contains(const TaxonomyEdge& edge) const { return edges_.count(edge) != 0; }

  // Sorted by (hyponym, hypernym).
  const std::set<TaxonomyEdge>& edges() const { return edges_; }
  const std::set<Term>& vertices() const { return vertices_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  // Hypernyms of `hyponym`, in sorted order.
  std::vector<Term> hypernyms_of(const Term& hyponym) const;
  // Distinct hyponyms, in sorted order.
  std::vector<Term> hyponyms() const;

  friend bool operator==(const Taxonomy& a, const Taxonomy& b) { return a.edges_ == b.edges_; }

 private:
  std::set<TaxonomyEdge> edges_;
  std::set<Term> vertices_;
};

enum class TerminologyFormat { kPlain, kTsvIdTerm };

// Parses "plain" or "tsv-id-term"; throws UsageError otherwise.
TerminologyFormat parse_terminology_format(std::string_view name);

struct TerminologyLoad {
  Terminology terminology;
  std::size_t collapsed_duplicates = 0;
};

struct TaxonomyLoad {
  Taxonomy taxonomy;
  std::size_t collapsed_duplicates = 0;
};

// `source` names the input in error messages.
TerminologyLoad parse_terminology(std::istream& in, TerminologyFormat format,
                                  std::string_view source = "<stream>");
TerminologyLoad load_terminology(const std::filesystem::path& path,
                                 TerminologyFormat format = TerminologyFormat::kPlain);

// Tab-separated rows of (hyponym, hypernym) or (id, hyponym, hypernym).
TaxonomyLoad parse_taxonomy(std::istream& in, std::string_view source = "<stream>");
TaxonomyLoad load_taxonomy(const std::filesystem::path& path);

void write_taxonomy(const Taxonomy& taxonomy, std::ostream& out);
void write_taxonomy(const Taxonomy& taxonomy, const std::filesystem::path& path);

}  // namespace taxoprompt

#endif  // TAXOPROMPT_TERMINOLOGY_HPP_
