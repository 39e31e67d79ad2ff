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

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>
#include <tuple>

#include "taxoprompt/error.hpp"
#include "taxoprompt/experiment.hpp"

#ifndef TAXOPROMPT_VERSION
#define TAXOPROMPT_VERSION "0.0.0"
#endif

namespace taxoprompt {
namespace {

nlohmann::json terms_json(const std::vector<Term>& terms) {
  auto out = nlohmann::json::array();
  for (const auto& t : terms) out.push_back(t.surface());
  return out;
}

}  // namespace

std::string_view tool_version() { return TAXOPROMPT_VERSION; }

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 initialisation failed");
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw IoError("error while reading " + path.string());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  return {
      {"tool", "taxoprompt"},
      {"version", tool_version()},
      {"command", command},
      {"method", to_string(config.method)},
      {"template",
       {{"name", config.tmpl.name()},
        {"pattern", config.tmpl.pattern()},
        {"terminal_period", config.tmpl.terminal_period()}}},
      {"k", config.k},
      {"scoring", {{"length_normalize", config.scoring.length_normalize}}},
      {"threads", config.threads},
      {"model", {{"name", model_name}, {"kind", to_string(model_kind)}, {"source", model_source}}},
      {"terminology",
       {{"path", terminology_path},
        {"sha256", terminology_sha256},
        {"format", terminology_format},
        {"terms", n_terms},
        {"collapsed_duplicates", collapsed_duplicates}}},
      {"canonicalization",
       "terms lowercased (ASCII), underscores mapped to spaces, whitespace collapsed; "
       "applied identically to predictions and gold"},
      {"output", {{"path", output_path}, {"edges", n_edges}}},
      {"skipped_terms", terms_json(skipped)},
      {"excluded_terms", terms_json(excluded)},
      {"started_at", started_at},
      {"finished_at", finished_at},
  };
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("error while writing " + path.string());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

SweepResult sweep(const LanguageModel& model, const InductionConfig& base,
                  const std::vector<PromptTemplate>& templates, std::vector<std::size_t> ks,
                  const Terminology& terminology, const Taxonomy& gold) {
  if (templates.empty() || ks.empty()) throw UsageError("sweep needs at least one template and k");
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (ks.front() == 0) throw UsageError("k must be at least 1");

  SweepResult result;
  result.method = std::string(to_string(base.method));
  result.model = model.descriptor().name;
  for (const auto& tmpl : templates) {
    InductionConfig config = base;
    config.tmpl = tmpl;
    config.k = ks.back();
    const InductionResult induced = induce(model, config, terminology);
    for (std::size_t k : ks) {
      result.rows.push_back(
          {tmpl, k, evaluate(truncate_to_k(induced, k), gold), induced.skipped.size()});
    }
  }
  std::stable_sort(result.rows.begin(), result.rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.tmpl.name(), a.k) < std::tie(b.tmpl.name(), b.k);
  });
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    if (result.rows[i].metrics.f_score > result.rows[result.best].metrics.f_score) result.best = i;
  }
  return result;
}

nlohmann::json SweepResult::to_json() const {
  auto rows_json = nlohmann::json::array();
  for (const auto& row : rows) {
    rows_json.push_back({{"template", row.tmpl.name()},
                         {"pattern", row.tmpl.pattern()},
                         {"terminal_period", row.tmpl.terminal_period()},
                         {"k", row.k},
                         {"skipped", row.skipped},
                         {"metrics", taxoprompt::to_json(row.metrics)}});
  }
  nlohmann::json j = {{"method", method}, {"model", model}, {"rows", rows_json}};
  if (!rows.empty()) j["best"] = {{"template", rows[best].tmpl.name()}, {"k", rows[best].k}};
  return j;
}

std::vector<PromptRun> prompt_runs_from_json(const nlohmann::json& j) {
  std::vector<PromptRun> runs;
  try {
    if (j.contains("rows")) {
      for (const auto& row : j.at("rows")) {
        runs.push_back({row.at("pattern").get<std::string>(),
                        metrics_from_json(row.at("metrics")).f_score});
      }
    } else if (j.contains("pattern") && j.contains("metrics")) {
      runs.push_back({j.at("pattern").get<std::string>(), metrics_from_json(j.at("metrics")).f_score});
    } else {
      throw DataError("run file has neither sweep rows nor a templated metrics record");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed run file: ") + e.what());
  }
  return runs;
}

}  // namespace taxoprompt
