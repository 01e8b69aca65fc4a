// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

// intertext: corpus-level intertextuality ratios and translation shifts.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "intertext/config.hpp"
#include "intertext/error.hpp"
#include "intertext/report.hpp"

using namespace intertext;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<long long> threshold;
  std::optional<std::size_t> baseline_k;
  std::optional<std::size_t> bootstrap;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  std::optional<std::string> source;
  std::optional<std::string> target;
  std::optional<std::size_t> top_n;
  std::optional<std::string> scores;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "key = value config file, or a run.json");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--threshold", o.threshold, "minimum folded vote count");
  cmd->add_option("--baseline-k", o.baseline_k, "baseline samples per reference");
  cmd->add_option("--bootstrap", o.bootstrap, "bootstrap replicates");
  cmd->add_option("--workers", o.workers, "bootstrap worker threads");
  cmd->add_option("--out", o.out, "output directory");
}

AnalysisConfig resolve(const Overrides& o) {
  AnalysisConfig c = o.config_path.empty() ? AnalysisConfig{} : load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.threshold) c.threshold = *o.threshold;
  if (o.baseline_k) c.baseline_k = *o.baseline_k;
  if (o.bootstrap) c.bootstrap_b = *o.bootstrap;
  if (o.workers) c.workers = *o.workers;
  if (o.out) c.set("out", *o.out);
  if (o.source) c.shift_source = *o.source;
  if (o.target) c.shift_target = *o.target;
  if (o.top_n) c.top_n = *o.top_n;
  if (o.scores) c.set("scores", *o.scores);
  if (c.baseline_k == 0) throw ConfigError("--baseline-k must be >= 1");
  if (c.bootstrap_b == 0) throw ConfigError("--bootstrap must be >= 1");
  if (c.workers == 0) throw ConfigError("--workers must be >= 1");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure intertextuality in verse corpora and how translation shifts it"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Overrides o;
  auto* refs = app.add_subcommand("refs", "filter and partition the cross-reference dataset");
  auto* embed = app.add_subcommand("embed", "fetch verse embeddings from the configured service");
  auto* ratio = app.add_subcommand("ratio", "intertextuality ratios with bootstrap intervals");
  auto* shift = app.add_subcommand("shift", "reference pairs ranked by similarity shift");
  auto* chart = app.add_subcommand("chart", "render ratios.json as an SVG bar chart");
  auto* translate = app.add_subcommand("translate", "machine-translate a corpus with few-shot prompts");
  auto* scores = app.add_subcommand("scores", "record externally computed translation quality scores");
  for (auto* cmd : {refs, embed, ratio, shift, chart, translate, scores}) add_common(cmd, o);
  shift->add_option("--source", o.source, "source corpus id");
  shift->add_option("--target", o.target, "target corpus id");
  shift->add_option("--top-n", o.top_n, "rows to keep");
  scores->add_option("--scores", o.scores, "CSV of source,target_lang,score");

  CLI11_PARSE(app, argc, argv);

  try {
    auto config = resolve(o);
    if (refs->parsed()) {
      auto s = cmd_refs(config);
      fmt::print("{} references: {} within_jewish, {} within_christian, {} across\n", s.total, s.within_jewish,
                 s.within_christian, s.across);
      fmt::print("skipped: {} ranges, {} below threshold, {} same book, {} unresolvable\n", s.skipped_ranges,
                 s.below_threshold, s.same_book, s.unresolvable);
      write_run_json(config, "refs");
    } else if (embed->parsed()) {
      auto store = cmd_embed(config);
      fmt::print("{} vectors of dim {}\n", store.size(), store.dim());
      write_run_json(config, "embed");
    } else if (ratio->parsed()) {
      for (const auto& row : cmd_ratio(config)) {
        const auto& r = row.result;
        fmt::print("{:<16} {:<16} ratio {:.3f}  95% CI [{:.3f}, {:.3f}]  (+/- {:.3f})  n={} dropped={}\n",
                   row.corpus_id, to_string(r.scope), r.ratio, r.ci_low, r.ci_high, r.half_width(), r.n_refs,
                   r.dropped);
      }
      write_run_json(config, "ratio");
    } else if (shift->parsed()) {
      for (const auto& rec : cmd_shift(config)) {
        fmt::print("{} {} {:+.3f} ({:.3f} -> {:.3f})\n", rec.ref.pair.first.str(), rec.ref.pair.second.str(),
                   rec.delta, rec.sim_source, rec.sim_target);
      }
      write_run_json(config, "shift");
    } else if (chart->parsed()) {
      cmd_chart(config);
      fmt::print("wrote {}/ratios.svg\n", config.out);
      write_run_json(config, "chart");
    } else if (translate->parsed()) {
      if (config.llm_endpoint.empty()) throw ConfigError("config does not name an 'llm_endpoint'");
      GenerationConfig gen;
      gen.endpoint = config.llm_endpoint;
      gen.model_name = config.llm_model;
      gen.timeout = std::chrono::milliseconds(config.llm_timeout_ms);
      HttpChatClient client(gen);
      auto run = cmd_translate(config, client);
      fmt::print("{} verses translated, {} failed, {} via first-line fallback\n", run.corpus.size(),
                 run.failures.size(), run.fallback_extractions);
      write_run_json(config, "translate");
    } else if (scores->parsed()) {
      auto ledger = cmd_scores(config);
      fmt::print("{} quality scores recorded\n", ledger.size());
      write_run_json(config, "scores");
    }
  } catch (const Error& e) {
    std::cerr << "intertext: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "intertext: unexpected error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
