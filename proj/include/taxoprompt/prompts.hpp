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

// Prompt templates: a pattern with one [X] slot for the hyponym and one [Y]
// slot for the hypernym. The input term always fills [X], whatever the word
// order of the pattern, so every prompt asks for the hypernym of its term.

#ifndef TAXOPROMPT_PROMPTS_HPP_
#define TAXOPROMPT_PROMPTS_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "taxoprompt/terminology.hpp"

namespace taxoprompt {

inline constexpr std::string_view kHyponymSlot = "[X]";
inline constexpr std::string_view kHypernymSlot = "[Y]";

class PromptTemplate {
 public:
  // Throws DataError unless `pattern` holds exactly one [X] and one [Y].
  PromptTemplate(std::string name, std::string pattern, bool terminal_period = false);

  const std::string& name() const { return name_; }
  const std::string& pattern() const { return pattern_; }
  // Whether rendering appends a '.' (unless the pattern already ends in one).
  bool terminal_period() const { return terminal_period_; }

  PromptTemplate with_terminal_period(bool on) const;

  // The fixed text between the two slots, e.g. "is a type of".
  std::string connective() const;

  friend bool operator==(const PromptTemplate&, const PromptTemplate&) = default;

 private:
  std::string name_;
  std::string pattern_;
  bool terminal_period_;
};

std::string render(const PromptTemplate& tmpl, const Term& hyponym, const Term& hypernym);

// Fills [Y] with `mask_token`. Throws DataError if the literal does not occur
// exactly once in the result (e.g. the hyponym itself contains it).
std::string render_masked(const PromptTemplate& tmpl, const Term& hyponym,
                          std::string_view mask_token);

// gen, spec, type, then the variants of the "is a subclass of" family:
// the_type, kind, form, one_form, is_a, a_type.
const std::vector<PromptTemplate>& builtin_templates();

// Builtins plus any loaded from files; later definitions replace earlier
// ones of the same name.
class TemplateRegistry {
 public:
  TemplateRegistry();

  void add(PromptTemplate tmpl);
  // Lines of "name<TAB>pattern"; blank lines and lines starting with '#'
  // are ignored.
  void load(std::istream& in, std::string_view source = "<stream>");
  void load(const std::filesystem::path& path);

  // Throws UsageError for unknown names.
  const PromptTemplate& find(std::string_view name) const;
  bool contains(std::string_view name) const;
  const std::vector<PromptTemplate>& templates() const { return templates_; }

 private:
  std::vector<PromptTemplate> templates_;
};

}  // namespace taxoprompt

#endif  // TAXOPROMPT_PROMPTS_HPP_
