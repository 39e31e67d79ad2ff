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

#include "taxoprompt/prompts.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "taxoprompt/error.hpp"
#include "taxoprompt/text.hpp"

namespace taxoprompt {
namespace {

// Single left-to-right pass so that slot-like text inside a term is never
// substituted a second time.
std::string substitute(const std::string& pattern, std::string_view x, std::string_view y) {
  std::string out;
  out.reserve(pattern.size() + x.size() + y.size());
  for (std::size_t i = 0; i < pattern.size();) {
    std::string_view rest(pattern.data() + i, pattern.size() - i);
    if (rest.substr(0, kHyponymSlot.size()) == kHyponymSlot) {
      out.append(x);
      i += kHyponymSlot.size();
    } else if (rest.substr(0, kHypernymSlot.size()) == kHypernymSlot) {
      out.append(y);
      i += kHypernymSlot.size();
    } else {
      out.push_back(pattern[i++]);
    }
  }
  return out;
}

std::string finish(std::string sentence, bool terminal_period) {
  if (terminal_period && (sentence.empty() || sentence.back() != '.')) sentence.push_back('.');
  return sentence;
}

}  // namespace

PromptTemplate::PromptTemplate(std::string name, std::string pattern, bool terminal_period)
    : name_(std::move(name)), pattern_(std::move(pattern)), terminal_period_(terminal_period) {
  if (name_.empty()) throw DataError("prompt template with empty name");
  const auto nx = text::count_occurrences(pattern_, kHyponymSlot);
  const auto ny = text::count_occurrences(pattern_, kHypernymSlot);
  if (nx != 1 || ny != 1) {
    std::ostringstream msg;
    msg << "prompt template \"" << name_ << "\" must contain exactly one [X] and one [Y] (found "
        << nx << " and " << ny << "): " << pattern_;
    throw DataError(msg.str());
  }
}

PromptTemplate PromptTemplate::with_terminal_period(bool on) const {
  return PromptTemplate(name_, pattern_, on);
}

std::string PromptTemplate::connective() const {
  const auto x = pattern_.find(kHyponymSlot);
  const auto y = pattern_.find(kHypernymSlot);
  const auto lo = std::min(x, y) + kHyponymSlot.size();
  const auto hi = std::max(x, y);
  return std::string(text::trim(std::string_view(pattern_).substr(lo, hi - lo)));
}

std::string render(const PromptTemplate& tmpl, const Term& hyponym, const Term& hypernym) {
  return finish(substitute(tmpl.pattern(), hyponym.surface(), hypernym.surface()),
                tmpl.terminal_period());
}

std::string render_masked(const PromptTemplate& tmpl, const Term& hyponym,
                          std::string_view mask_token) {
  if (mask_token.empty()) throw DataError("empty mask literal");
  std::string out = finish(substitute(tmpl.pattern(), hyponym.surface(), mask_token),
                           tmpl.terminal_period());
  const auto n = text::count_occurrences(out, mask_token);
  if (n != 1) {
    std::ostringstream msg;
    msg << "masked prompt must contain the mask literal exactly once, found " << n << ": "
        << out;
    throw DataError(msg.str());
  }
  return out;
}

const std::vector<PromptTemplate>& builtin_templates() {
  static const std::vector<PromptTemplate> kBuiltins = {
      {"gen", "[Y] is more general than [X]"},
      {"spec", "[X] is more specific than [Y]"},
      {"type", "[X] is a type of [Y]"},
      {"the_type", "[X] is the type of [Y]"},
      {"kind", "[X] is a kind of [Y]"},
      {"form", "[X] is a form of [Y]"},
      {"one_form", "[X] is one form of [Y]"},
      {"is_a", "[X] is a [Y]"},
      {"a_type", "[X] is a type [Y]"},
  };
  return kBuiltins;
}

TemplateRegistry::TemplateRegistry() : templates_(builtin_templates()) {}

void TemplateRegistry::add(PromptTemplate tmpl) {
  auto it = std::find_if(templates_.begin(), templates_.end(),
                         [&](const PromptTemplate& t) { return t.name() == tmpl.name(); });
  if (it != templates_.end()) {
    *it = std::move(tmpl);
  } else {
    templates_.push_back(std::move(tmpl));
  }
}

void TemplateRegistry::load(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    if (text::is_blank(line) || text::trim(line).front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      std::ostringstream msg;
      msg << source << ":" << line_no << ": expected name<TAB>pattern";
      throw DataError(msg.str());
    }
    std::string name(text::trim(std::string_view(line).substr(0, tab)));
    std::string pattern(text::trim(std::string_view(line).substr(tab + 1)));
    try {
      add(PromptTemplate(std::move(name), std::move(pattern)));
    } catch (const DataError& e) {
      std::ostringstream msg;
      msg << source << ":" << line_no << ": " << e.what();
      throw DataError(msg.str());
    }
  }
}

void TemplateRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open template file " + path.string());
  load(in, path.string());
}

const PromptTemplate& TemplateRegistry::find(std::string_view name) const {
  for (const auto& t : templates_) {
    if (t.name() == name) return t;
  }
  std::string known;
  for (const auto& t : templates_) known += (known.empty() ? "" : ", ") + t.name();
  throw UsageError("unknown prompt template \"" + std::string(name) + "\" (known: " + known + ")");
}

bool TemplateRegistry::contains(std::string_view name) const {
  return std::any_of(templates_.begin(), templates_.end(),
                     [&](const PromptTemplate& t) { return t.name() == name; });
}

}  // namespace taxoprompt
