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

#include "taxoprompt/cli.hpp"

#include <spdlog/fmt/fmt.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "taxoprompt/analysis.hpp"
#include "taxoprompt/error.hpp"
#include "taxoprompt/evaluation.hpp"
#include "taxoprompt/experiment.hpp"
#include "taxoprompt/induction.hpp"
#include "taxoprompt/model_hub.hpp"
#include "taxoprompt/prompts.hpp"
#include "taxoprompt/scoring.hpp"
#include "taxoprompt/text.hpp"

namespace taxoprompt {
namespace {

namespace fs = std::filesystem;

// Options shared by every command that runs induction.
struct InduceFlags {
  std::string method = "restrict-mlm";
  std::string model;
  std::string model_dir;
  std::string terminology;
  std::string terminology_format = "plain";
  std::string template_file;
  bool period = false;
  bool normalize_length = false;
  unsigned threads = 0;
};

void add_model_flags(CLI::App* cmd, InduceFlags& f, bool require_model) {
  auto* model = cmd->add_option("--model", f.model,
                                "Checkpoint name or directory, or mock:TABLE.tsv");
  if (require_model) model->required();
  cmd->add_option("--model-dir", f.model_dir,
                  "Model cache directory (default $TAXOPROMPT_MODEL_DIR or "
                  "~/.cache/taxoprompt/models)");
}

void add_induce_flags(CLI::App* cmd, InduceFlags& f) {
  add_model_flags(cmd, f, true);
  cmd->add_option("--method", f.method, "restrict-mlm | prompt-mlm | lm-scorer")
      ->capture_default_str();
  cmd->add_option("--terminology-format", f.terminology_format, "plain | tsv-id-term")
      ->capture_default_str();
  cmd->add_option("--template-file", f.template_file,
                  "Extra templates, one \"name<TAB>pattern\" per line");
  cmd->add_flag("--period", f.period, "Append a terminal period to rendered prompts");
  cmd->add_flag("--normalize-length", f.normalize_length,
                "Rank lm-scorer sentences by mean per-token log-probability");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
}

std::unique_ptr<LanguageModel> open_model(const InduceFlags& f) {
  return f.model_dir.empty() ? open_backend(f.model) : open_backend(f.model, f.model_dir);
}

TemplateRegistry load_registry(const InduceFlags& f) {
  TemplateRegistry registry;
  if (!f.template_file.empty()) registry.load(fs::path(f.template_file));
  return registry;
}

PromptTemplate pick_template(const TemplateRegistry& registry, const std::string& name,
                             const InduceFlags& f) {
  return registry.find(name).with_terminal_period(f.period);
}

InductionConfig make_config(const InduceFlags& f, PromptTemplate tmpl, std::size_t k) {
  InductionConfig config;
  config.method = parse_method(f.method);
  config.tmpl = std::move(tmpl);
  config.k = k;
  config.scoring.length_normalize = f.normalize_length;
  config.threads = f.threads;
  return config;
}

Terminology terminology_or_gold(const InduceFlags& f, const Taxonomy& gold) {
  if (!f.terminology.empty()) {
    return load_terminology(f.terminology, parse_terminology_format(f.terminology_format))
        .terminology;
  }
  Terminology terms;
  for (const auto& v : gold.vertices()) terms.add(v);
  return terms;
}

std::string command_line(int argc, const char* const* argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s.push_back(' ');
    s += argv[i];
  }
  return s;
}

void print_metrics_header(std::ostream& out, std::size_t label_width) {
  out << fmt::format("{:<{}}  {:>6}  {:>6}  {:>6}  {:>9}  {:>6}  {:>7}\n", "", label_width, "P",
                     "R", "F", "predicted", "gold", "correct");
}

void print_metrics_row(std::ostream& out, const std::string& label, std::size_t label_width,
                       const EdgeMetrics& m) {
  out << fmt::format("{:<{}}  {:>6}  {:>6}  {:>6}  {:>9}  {:>6}  {:>7}\n", label, label_width,
                     format_percent(m.precision), format_percent(m.recall),
                     format_percent(m.f_score), m.n_predicted, m.n_gold, m.n_correct);
}

std::vector<std::string> read_nonblank_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (text::read_line(in, line)) {
    if (!text::is_blank(line)) lines.push_back(line);
  }
  return lines;
}

// --- induce ------------------------------------------------------------------

struct InduceCommand {
  InduceFlags flags;
  std::string tmpl = "type";
  std::size_t k = 1;
  std::string out;
  std::string manifest;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("induce", "Predict hypernyms for every term of a terminology");
    add_induce_flags(cmd, flags);
    cmd->add_option("--template", tmpl, "Prompt template name")->capture_default_str();
    cmd->add_option("--k", k, "Hypernyms per term")->capture_default_str();
    cmd->add_option("--terminology", flags.terminology, "Terminology file")->required();
    cmd->add_option("--out", out, "Output taxonomy (TSV)")->required();
    cmd->add_option("--manifest", manifest, "Run manifest path (default OUT.manifest.json)");
  }

  int run(int argc, const char* const* argv, std::ostream& os) {
    RunManifest m;
    m.started_at = utc_timestamp();
    m.command = command_line(argc, argv);
    const auto registry = load_registry(flags);
    m.config = make_config(flags, pick_template(registry, tmpl, flags), k);
    m.config.validate();
    const auto load =
        load_terminology(flags.terminology, parse_terminology_format(flags.terminology_format));
    const auto model = open_model(flags);
    const InductionResult result = induce(*model, m.config, load.terminology);
    write_taxonomy(result.taxonomy, fs::path(out));

    m.model_name = model->descriptor().name;
    m.model_kind = model->kind();
    m.model_source = model->descriptor().source;
    m.terminology_path = flags.terminology;
    m.terminology_sha256 = sha256_file(flags.terminology);
    m.terminology_format = flags.terminology_format;
    m.n_terms = load.terminology.size();
    m.collapsed_duplicates = load.collapsed_duplicates;
    m.output_path = out;
    m.n_edges = result.taxonomy.size();
    m.skipped = result.skipped;
    m.excluded = result.excluded;
    m.finished_at = utc_timestamp();
    const std::string manifest_path = manifest.empty() ? out + ".manifest.json" : manifest;
    write_json(m.to_json(), manifest_path);
    os << fmt::format("{} edges for {} terms written to {} ({} skipped); manifest {}\n",
                      result.taxonomy.size(), load.terminology.size(), out, result.skipped.size(),
                      manifest_path);
    return kExitOk;
  }
};

// --- score -------------------------------------------------------------------

struct ScoreCommand {
  InduceFlags flags;
  std::string input;
  std::string out;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("score", "Score sentences, one per line");
    add_model_flags(cmd, flags, true);
    cmd->add_option("--input", input, "Sentence file, or - for standard input")->required();
    cmd->add_option("--out", out, "Output file (default standard output)");
  }

  int run(std::istream& in, std::ostream& os) {
    std::vector<std::string> sentences;
    if (input == "-") {
      sentences = read_nonblank_lines(in);
    } else {
      std::ifstream file(input, std::ios::binary);
      if (!file) throw IoError("cannot open " + input);
      sentences = read_nonblank_lines(file);
    }
    const auto model = open_model(flags);
    std::ofstream file_out;
    std::ostream* dest = &os;
    if (!out.empty()) {
      file_out.open(out, std::ios::binary);
      if (!file_out) throw IoError("cannot write " + out);
      dest = &file_out;
    }
    for (const auto& s : sentences) {
      const std::string sentence(text::trim(s));
      *dest << fmt::format("{:.6f}\t{}\n", score_sentence(*model, sentence).log_score, sentence);
    }
    if (!*dest) throw IoError("error while writing scores");
    return kExitOk;
  }
};

// --- evaluate ----------------------------------------------------------------

struct EvaluateCommand {
  std::string pred;
  std::string gold;
  std::vector<std::string> avg;
  std::string json;
  std::string tmpl;
  std::string template_file;
  bool verbose = false;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("evaluate", "Edge-level precision, recall and F-score");
    cmd->add_option("--pred", pred, "Predicted taxonomy (TSV)");
    cmd->add_option("--gold", gold, "Gold taxonomy (TSV)");
    cmd->add_option("--avg", avg, "Metrics JSON files from earlier evaluate --json runs to average");
    cmd->add_option("--json", json, "Write the metrics as JSON");
    cmd->add_option("--template", tmpl, "Label the JSON record with this template");
    cmd->add_option("--template-file", template_file, "Extra templates for --template");
    cmd->add_flag("--verbose", verbose, "Also report the F-score of the averaged P and R");
  }

  int run(std::ostream& os) {
    if (pred.empty() != gold.empty()) throw UsageError("--pred and --gold go together");
    if (pred.empty() && avg.empty()) throw UsageError("give --pred and --gold, or --avg");
    std::vector<std::pair<std::string, EdgeMetrics>> rows;
    for (const auto& path : avg) {
      const auto j = read_json_file(path);
      rows.emplace_back(fs::path(path).filename().string(),
                        metrics_from_json(j.contains("metrics") ? j.at("metrics") : j));
    }
    std::optional<EdgeMetrics> current;
    if (!pred.empty()) {
      current = evaluate(load_taxonomy(pred).taxonomy, load_taxonomy(gold).taxonomy);
      rows.emplace_back(fs::path(pred).filename().string(), *current);
    }
    std::vector<EdgeMetrics> all;
    std::size_t width = 7;
    for (const auto& [label, m] : rows) {
      all.push_back(m);
      width = std::max(width, label.size());
    }
    print_metrics_header(os, width);
    for (const auto& [label, m] : rows) print_metrics_row(os, label, width, m);
    nlohmann::json record;
    if (rows.size() > 1) {
      const EdgeMetrics mean = average_metrics(all);
      print_metrics_row(os, "average", width, mean);
      if (verbose) {
        os << "F of averaged P and R: " << format_percent(f_of_mean_pr(all)) << '\n';
      }
      record = {{"metrics", to_json(mean)},
                {"averaged", avg},
                {"f_of_mean_pr", f_of_mean_pr(all)},
                {"average", "unweighted mean of per-run P, R and F"}};
      if (current) record["averaged"].push_back(pred);
    } else {
      record = {{"metrics", to_json(*current)}, {"pred", pred}, {"gold", gold}};
    }
    if (!tmpl.empty()) {
      TemplateRegistry registry;
      if (!template_file.empty()) registry.load(fs::path(template_file));
      record["template"] = tmpl;
      record["pattern"] = registry.find(tmpl).pattern();
    }
    if (!json.empty()) write_json(record, json);
    return kExitOk;
  }
};

// --- analyze -----------------------------------------------------------------

struct SingleTokenCommand {
  InduceFlags flags;
  std::string gold;
  std::string tmpl = "type";
  std::size_t k = 1;
  bool filter_only = false;
  std::string filtered_gold;
  std::string json;

  void attach(CLI::App* analyze) {
    auto* cmd = analyze->add_subcommand(
        "single-token", "Share of gold hyponyms whose hypernyms are all single tokens");
    add_induce_flags(cmd, flags);
    cmd->add_option("--gold", gold, "Gold taxonomy (TSV)")->required();
    cmd->add_option("--terminology", flags.terminology,
                    "Terminology file (default: the gold vertices)");
    cmd->add_option("--template", tmpl, "Prompt template name")->capture_default_str();
    cmd->add_option("--k", k, "Hypernyms per term")->capture_default_str();
    cmd->add_flag("--filter-only", filter_only, "Report the retained share without inducing");
    cmd->add_option("--filtered-gold", filtered_gold, "Write the filtered gold taxonomy here");
    cmd->add_option("--json", json, "Write the report as JSON");
  }

  int run(std::ostream& os) {
    const Taxonomy g = load_taxonomy(gold).taxonomy;
    const auto model = open_model(flags);
    const SingleTokenFilter filter = filter_single_token(*model, g);
    if (!filtered_gold.empty()) write_taxonomy(filter.gold, fs::path(filtered_gold));
    nlohmann::json record = {{"model", model->descriptor().name},
                             {"gold", gold},
                             {"total_terms", filter.total_terms},
                             {"kept_terms", filter.kept_terms},
                             {"retained_pct", filter.retained_pct}};
    if (filter_only) {
      os << fmt::format("{:>11}  {:>10}\n{:>11}  {:>10.2f}\n", "total terms", "% retained",
                        filter.total_terms, filter.retained_pct);
    } else {
      const auto registry = load_registry(flags);
      const auto config = make_config(flags, pick_template(registry, tmpl, flags), k);
      const SingleTokenReport r = single_token_report(*model, config, terminology_or_gold(flags, g), g);
      os << fmt::format("{:>11}  {:>10}  {:>10}  {:>10}  {:>10}\n", "total terms", "% retained",
                        "F original", "F filtered", "% increase");
      os << fmt::format("{:>11}  {:>10.2f}  {:>10}  {:>10}  {:>10.2f}\n", r.total_terms,
                        r.retained_pct, format_percent(r.f_original),
                        format_percent(r.f_filtered), r.increase_pct);
      record["method"] = to_string(config.method);
      record["template"] = config.tmpl.name();
      record["k"] = config.k;
      record["original"] = to_json(r.original);
      record["filtered"] = to_json(r.filtered);
      record["increase_pct"] = r.increase_pct;
    }
    if (!json.empty()) write_json(record, json);
    return kExitOk;
  }
};

struct PromptFreqCommand {
  std::vector<std::string> corpus;
  std::string patterns;
  std::vector<std::string> runs;
  std::string out;
  std::string json;

  void attach(CLI::App* analyze) {
    auto* cmd = analyze->add_subcommand("prompt-freq", "Count prompt phrasings in a text corpus");
    cmd->add_option("--corpus", corpus, "Plain-text corpus files")->required();
    cmd->add_option("--patterns", patterns,
                    "Patterns, one per line (default: the connectives of the built-in templates)");
    cmd->add_option("--runs", runs, "Sweep JSON files, one per domain, for the average F column");
    cmd->add_option("--out", out, "Write the TSV here instead of standard output");
    cmd->add_option("--json", json, "Write the counts as JSON");
  }

  int run(std::ostream& os) {
    std::vector<std::string> pats;
    if (patterns.empty()) {
      for (const auto& t : builtin_templates()) {
        const std::string c(text::trim(t.connective()));
        if (std::find(pats.begin(), pats.end(), c) == pats.end()) pats.push_back(c);
      }
    } else {
      std::ifstream in(patterns, std::ios::binary);
      if (!in) throw IoError("cannot open " + patterns);
      std::string line;
      while (text::read_line(in, line)) {
        if (!text::is_blank(line)) pats.push_back(line);
      }
    }
    std::vector<fs::path> files(corpus.begin(), corpus.end());
    auto freqs = count_prompt_frequency(files, pats);
    if (!runs.empty()) {
      std::vector<std::vector<PromptRun>> domains;
      for (const auto& r : runs) domains.push_back(prompt_runs_from_json(read_json_file(r)));
      attach_average_f(freqs, domains);
    }
    std::ostringstream tsv;
    tsv << "pattern\tcount\tavg_f\n";
    auto arr = nlohmann::json::array();
    for (const auto& f : freqs) {
      tsv << f.pattern << '\t' << f.count << '\t' << (f.avg_f ? format_percent(*f.avg_f) : "-")
          << '\n';
      nlohmann::json row = {{"pattern", f.pattern}, {"count", f.count}};
      row["avg_f"] = f.avg_f ? nlohmann::json(*f.avg_f) : nlohmann::json(nullptr);
      arr.push_back(row);
    }
    if (out.empty()) {
      os << tsv.str();
    } else {
      std::ofstream file(out, std::ios::binary);
      if (!(file << tsv.str())) throw IoError("cannot write " + out);
    }
    if (!json.empty()) {
      write_json({{"corpus", corpus}, {"normalization", "lowercase, whitespace runs as one space"},
                  {"patterns", arr}},
                 json);
    }
    return kExitOk;
  }
};

// --- sweep -------------------------------------------------------------------

struct SweepCommand {
  InduceFlags flags;
  std::string gold;
  std::vector<std::string> templates{"gen", "spec", "type"};
  std::vector<std::size_t> ks{1, 3, 5};
  std::string out;
  std::string json;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("sweep", "Induce and evaluate over a template x k grid");
    add_induce_flags(cmd, flags);
    cmd->add_option("--gold", gold, "Gold taxonomy (TSV)")->required();
    cmd->add_option("--terminology", flags.terminology,
                    "Terminology file (default: the gold vertices)");
    cmd->add_option("--template", templates, "Template names")->capture_default_str();
    cmd->add_option("--k", ks, "Values of k")->capture_default_str();
    cmd->add_option("--out", out, "Write the table as TSV");
    cmd->add_option("--json", json, "Write the table as JSON");
  }

  int run(std::ostream& os) {
    const auto registry = load_registry(flags);
    std::vector<PromptTemplate> tmpls;
    for (const auto& name : templates) tmpls.push_back(pick_template(registry, name, flags));
    const Taxonomy g = load_taxonomy(gold).taxonomy;
    const Terminology terms = terminology_or_gold(flags, g);
    const auto model = open_model(flags);
    const auto base = make_config(flags, tmpls.front(), 1);
    const SweepResult result = sweep(*model, base, tmpls, ks, terms, g);

    std::size_t width = 8;
    for (const auto& row : result.rows) width = std::max(width, row.tmpl.name().size());
    os << fmt::format("{:<{}}  {:>3}  {:>6}  {:>6}  {:>6}\n", "template", width, "k", "P", "R",
                      "F");
    std::ostringstream tsv;
    tsv << "template\tk\tP\tR\tF\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      const auto& row = result.rows[i];
      os << fmt::format("{:<{}}  {:>3}  {:>6}  {:>6}  {:>6}{}\n", row.tmpl.name(), width, row.k,
                        format_percent(row.metrics.precision), format_percent(row.metrics.recall),
                        format_percent(row.metrics.f_score), i == result.best ? "  *" : "");
      tsv << row.tmpl.name() << '\t' << row.k << '\t' << format_percent(row.metrics.precision)
          << '\t' << format_percent(row.metrics.recall) << '\t'
          << format_percent(row.metrics.f_score) << '\n';
    }
    const auto& best = result.rows[result.best];
    os << fmt::format("best: ({}, {}) F={}\n", best.tmpl.name(), best.k,
                      format_percent(best.metrics.f_score));
    if (!out.empty()) {
      std::ofstream file(out, std::ios::binary);
      if (!(file << tsv.str())) throw IoError("cannot write " + out);
    }
    if (!json.empty()) write_json(result.to_json(), json);
    return kExitOk;
  }
};

void configure_logging(const std::string& level) {
  static const bool installed = [] {
    auto logger = spdlog::stderr_color_mt("taxoprompt");
    spdlog::set_default_logger(logger);
    return true;
  }();
  (void)installed;
  const auto lvl = spdlog::level::from_str(level);
  if (lvl == spdlog::level::off && level != "off") {
    throw UsageError("unknown log level \"" + level + "\"");
  }
  spdlog::set_level(lvl);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Zero-shot taxonomy induction with pretrained language models", "taxoprompt"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.set_config("--config", "", "Read options from a key=value file; flags override it");
  app.require_subcommand(1);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "trace | debug | info | warn | error | off")
      ->capture_default_str();

  InduceCommand induce_cmd;
  ScoreCommand score_cmd;
  EvaluateCommand evaluate_cmd;
  SingleTokenCommand single_token_cmd;
  PromptFreqCommand prompt_freq_cmd;
  SweepCommand sweep_cmd;
  induce_cmd.attach(app);
  score_cmd.attach(app);
  evaluate_cmd.attach(app);
  auto* analyze = app.add_subcommand("analyze", "Single-token and prompt-frequency diagnostics");
  analyze->require_subcommand(1);
  single_token_cmd.attach(analyze);
  prompt_freq_cmd.attach(analyze);
  sweep_cmd.attach(app);

  if (argc <= 1) {
    err << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    configure_logging(log_level);
    if (app.got_subcommand("induce")) return induce_cmd.run(argc, argv, out);
    if (app.got_subcommand("score")) return score_cmd.run(in, out);
    if (app.got_subcommand("evaluate")) return evaluate_cmd.run(out);
    if (app.got_subcommand("sweep")) return sweep_cmd.run(out);
    if (analyze->got_subcommand("single-token")) return single_token_cmd.run(out);
    if (analyze->got_subcommand("prompt-freq")) return prompt_freq_cmd.run(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace taxoprompt
