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

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "taxoprompt/error.hpp"
#include "taxoprompt/text.hpp"

namespace taxoprompt {

std::string canonicalize(std::string_view surface) {
  std::string out;
  out.reserve(surface.size());
  bool pending_space = false;
  for (char c : surface) {
    if (c == '_') c = ' ';
    if (text::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(text::ascii_lower(c));
  }
  return out;
}

Term::Term(std::string_view surface) : surface_(canonicalize(surface)) {
  if (surface_.empty()) {
    throw DataError("empty term (input was \"" + std::string(surface) + "\")");
  }
}

std::ostream& operator<<(std::ostream& os, const Term& term) { return os << term.surface(); }

Terminology::Terminology(const std::vector<std::string>& surfaces) {
  for (const auto& s : surfaces) add(Term(s));
}

bool Terminology::add(const Term& term) {
  auto [it, inserted] = index_.emplace(term.surface(), terms_.size());
  if (inserted) terms_.push_back(term);
  return inserted;
}

std::optional<std::size_t> Terminology::index_of(const Term& term) const {
  auto it = index_.find(term.surface());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TaxonomyEdge::TaxonomyEdge(Term hypo, Term hyper)
    : hyponym(std::move(hypo)), hypernym(std::move(hyper)) {
  if (hyponym == hypernym) {
    throw DataError("self-loop edge on term \"" + hyponym.surface() + "\"");
  }
}

bool Taxonomy::add(const TaxonomyEdge& edge) {
  if (!edges_.insert(edge).second) return false;
  vertices_.insert(edge.hyponym);
  vertices_.insert(edge.hypernym);
  return true;
}

bool Taxonomy::add(std::string_view hyponym, std::string_view hypernym) {
  return add(TaxonomyEdge(Term(hyponym), Term(hypernym)));
}

std::vector<Term> Taxonomy::hypernyms_of(const Term& hyponym) const {
  std::vector<Term> out;
  auto it = std::find_if(edges_.begin(), edges_.end(),
                         [&](const TaxonomyEdge& e) { return e.hyponym == hyponym; });
  for (; it != edges_.end() && it->hyponym == hyponym; ++it) out.push_back(it->hypernym);
  return out;
}

std::vector<Term> Taxonomy::hyponyms() const {
  std::vector<Term> out;
  for (const auto& e : edges_) {
    if (out.empty() || out.back() != e.hyponym) out.push_back(e.hyponym);
  }
  return out;
}

TerminologyFormat parse_terminology_format(std::string_view name) {
  if (name == "plain") return TerminologyFormat::kPlain;
  if (name == "tsv-id-term") return TerminologyFormat::kTsvIdTerm;
  throw UsageError("unknown terminology format \"" + std::string(name) +
                   "\" (expected plain or tsv-id-term)");
}

TerminologyLoad parse_terminology(std::istream& in, TerminologyFormat format,
                                  std::string_view source) {
  TerminologyLoad result;
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    if (text::is_blank(line)) continue;
    std::string_view surface = line;
    if (format == TerminologyFormat::kTsvIdTerm) {
      auto fields = text::split(line, '\t');
      if (fields.size() < 2) {
        std::ostringstream msg;
        msg << source << ":" << line_no << ": expected id<TAB>term, got " << fields.size()
            << " column(s)";
        throw DataError(msg.str());
      }
      surface = fields[1];
      if (text::is_blank(surface)) {
        std::ostringstream msg;
        msg << source << ":" << line_no << ": empty term column";
        throw DataError(msg.str());
      }
    }
    if (!result.terminology.add(Term(surface))) ++result.collapsed_duplicates;
  }
  if (result.terminology.empty()) {
    throw DataError(std::string(source) + ": terminology contains no terms");
  }
  if (result.collapsed_duplicates > 0) {
    spdlog::info("{}: collapsed {} duplicate term(s)", source, result.collapsed_duplicates);
  }
  return result;
}

TerminologyLoad load_terminology(const std::filesystem::path& path, TerminologyFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open terminology file " + path.string());
  return parse_terminology(in, format, path.string());
}

TaxonomyLoad parse_taxonomy(std::istream& in, std::string_view source) {
  TaxonomyLoad result;
  std::vector<std::size_t> self_loops;
  std::string line;
  std::size_t row = 0;
  while (text::read_line(in, line)) {
    ++row;
    if (text::is_blank(line)) continue;
    auto fields = text::split(line, '\t');
    if (fields.size() != 2 && fields.size() != 3) {
      std::ostringstream msg;
      msg << source << ": row " << row << ": expected 2 or 3 tab-separated columns, got "
          << fields.size();
      throw DataError(msg.str());
    }
    const std::size_t offset = fields.size() - 2;
    if (text::is_blank(fields[offset]) || text::is_blank(fields[offset + 1])) {
      std::ostringstream msg;
      msg << source << ": row " << row << ": empty hyponym or hypernym";
      throw DataError(msg.str());
    }
    Term hypo(fields[offset]);
    Term hyper(fields[offset + 1]);
    if (hypo == hyper) {
      self_loops.push_back(row);
      continue;
    }
    if (!result.taxonomy.add(TaxonomyEdge(std::move(hypo), std::move(hyper)))) {
      ++result.collapsed_duplicates;
    }
  }
  if (!self_loops.empty()) {
    std::ostringstream msg;
    msg << source << ": self-loop edge(s) at row(s)";
    for (std::size_t i = 0; i < self_loops.size(); ++i) msg << (i ? ", " : " ") << self_loops[i];
    throw DataError(msg.str());
  }
  if (result.collapsed_duplicates > 0) {
    spdlog::info("{}: collapsed {} duplicate edge(s)", source, result.collapsed_duplicates);
  }
  return result;
}

TaxonomyLoad load_taxonomy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open taxonomy file " + path.string());
  return parse_taxonomy(in, path.string());
}

void write_taxonomy(const Taxonomy& taxonomy, std::ostream& out) {
  for (const auto& e : taxonomy.edges()) {
    out << e.hyponym.surface() << '\t' << e.hypernym.surface() << '\n';
  }
}

void write_taxonomy(const Taxonomy& taxonomy, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_taxonomy(taxonomy, out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace taxoprompt
