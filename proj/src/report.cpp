// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#include "intertext/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "intertext/error.hpp"
#include "text_util.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace intertext {
namespace {

void require_file(const std::string& path, std::string_view what) {
  if (path.empty()) throw ConfigError(fmt::format("config does not name a {}", what));
  if (!fs::is_regular_file(path)) throw ConfigError(fmt::format("{} '{}' does not exist", what, path));
}

fs::path out_dir(const AnalysisConfig& config) {
  fs::path dir(config.out);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
}

std::vector<const Corpus*> resolution_set(const AnalysisConfig& config, const LoadedCorpora& loaded) {
  std::vector<const Corpus*> out;
  if (config.resolve_in.empty()) {
    for (const auto& c : loaded.corpora) out.push_back(&c);
  } else {
    for (const auto& id : config.resolve_in) out.push_back(&loaded.get(id));
  }
  return out;
}

std::vector<CrossRef> configured_refs(const AnalysisConfig& config, const LoadedCorpora& corpora) {
  if (!config.refs_file.empty()) {
    require_file(config.refs_file, "filtered reference file");
    std::ifstream in(config.refs_file);
    return read_refs(in);
  }
  return run_refs_pipeline(config, corpora).refs;
}

EmbeddingStore configured_store(const AnalysisConfig& config) {
  if (!config.embeddings.empty()) {
    for (const auto& p : config.embeddings) require_file(p, "embedding store");
    auto store = load_store_file(config.embeddings.front());
    for (std::size_t i = 1; i < config.embeddings.size(); ++i) store.merge(load_store_file(config.embeddings[i]));
    return store;
  }
  if (!config.embed_endpoint.empty()) return cmd_embed(config);
  throw ConfigError("config names neither 'embeddings' nor 'embed_endpoint'");
}

bool resolves(const Corpus& corpus, const CrossRef& ref) {
  return corpus.resolve(ref.pair.first) && corpus.resolve(ref.pair.second);
}

}  // namespace

std::string render_number(double x) { return nlohmann::json(x).dump(); }

const Corpus& LoadedCorpora::get(const std::string& id) const {
  auto it = std::find_if(corpora.begin(), corpora.end(), [&](const Corpus& c) { return c.id() == id; });
  if (it == corpora.end()) throw ConfigError(fmt::format("unknown corpus '{}'", id));
  return *it;
}

LoadedCorpora load_corpora(const AnalysisConfig& config) {
  if (config.corpora.empty()) throw ConfigError("config declares no corpora");
  LoadedCorpora out;
  for (const auto& spec : config.corpora) {
    require_file(spec.path, fmt::format("corpus file for '{}'", spec.id));
    auto corpus = load_corpus(spec.path, spec.id, spec.language, spec.provenance);
    if (!spec.versification.empty()) {
      require_file(spec.versification, fmt::format("versification map for '{}'", spec.id));
      auto applied = apply_versification(corpus, load_versification(spec.versification));
      for (const auto& ref : applied.missing_sources) {
        out.warnings.push_back(fmt::format("{}: versification source {} not in corpus", spec.id, ref.str()));
      }
      corpus = std::move(applied.corpus);
    }
    out.corpora.push_back(std::move(corpus));
  }
  return out;
}

RefsOutcome run_refs_pipeline(const AnalysisConfig& config, const LoadedCorpora& corpora) {
  require_file(config.crossrefs, "cross-reference file");
  const auto spec = config.testaments.empty() ? TestamentSpec::standard() : TestamentSpec::load(config.testaments);
  const auto aliases = config.book_aliases.empty() ? BookAliases::standard() : BookAliases::load(config.book_aliases);

  std::ifstream in(config.crossrefs);
  auto parsed = parse_crossrefs(in, aliases);
  auto folded = fold_bidirectional(parsed.refs);
  auto filtered = filter_refs(folded.pairs, config.threshold, spec, resolution_set(config, corpora));
  auto parts = partition(filtered.refs);

  RefsOutcome out;
  out.summary.total = filtered.refs.size();
  out.summary.within_jewish = parts.within_jewish.size();
  out.summary.within_christian = parts.within_christian.size();
  out.summary.across = parts.across.size();
  out.summary.skipped_ranges = parsed.skipped_ranges;
  out.summary.unresolvable = filtered.unresolvable;
  out.summary.below_threshold = filtered.below_threshold;
  out.summary.same_book = filtered.same_book;
  out.summary.merged_duplicates = folded.merged_duplicates;
  out.summary.self_links = parsed.self_links;
  out.refs = std::move(filtered.refs);
  return out;
}

RefsSummary cmd_refs(const AnalysisConfig& config) {
  auto corpora = load_corpora(config);
  auto outcome = run_refs_pipeline(config, corpora);
  auto dir = out_dir(config);

  std::ostringstream tsv;
  write_refs(outcome.refs, tsv);
  write_text(dir / "refs.tsv", tsv.str());

  const auto& s = outcome.summary;
  ojson j{{"total", s.total},
          {"within_jewish", s.within_jewish},
          {"within_christian", s.within_christian},
          {"across", s.across},
          {"skipped_ranges", s.skipped_ranges},
          {"unresolvable", s.unresolvable},
          {"below_threshold", s.below_threshold},
          {"same_book", s.same_book},
          {"merged_duplicates", s.merged_duplicates},
          {"self_links", s.self_links}};
  write_text(dir / "refs_summary.json", j.dump(2) + "\n");
  return s;
}

std::vector<QualityScore> parse_scores(std::istream& in) {
  std::vector<QualityScore> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty() || line[0] == '#') continue;
    if (out.empty() && line.rfind("source,", 0) == 0) continue;
    auto cols = detail::split(line, ',');
    if (cols.size() != 3) throw ParseError("expected source,target_lang,score", lineno);
    auto source = detail::trim(cols[0]);
    auto target = detail::trim(cols[1]);
    auto text = detail::trim(cols[2]);
    if (source.empty() || target.empty()) throw ParseError("empty source or target language", lineno);
    double score = 0.0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), score);
    if (text.empty() || ec != std::errc() || p != text.data() + text.size() || !std::isfinite(score)) {
      throw ParseError(fmt::format("malformed score '{}'", text), lineno);
    }
    out.push_back({std::string(source), std::string(target), score});
  }
  return out;
}

std::vector<RatioRow> cmd_ratio(const AnalysisConfig& config) {
  auto corpora = load_corpora(config);
  auto refs = configured_refs(config, corpora);
  auto store = configured_store(config);

  std::vector<QualityScore> scores;
  if (!config.scores.empty()) {
    require_file(config.scores, "quality score file");
    std::ifstream in(config.scores);
    scores = parse_scores(in);
  }

  RatioOptions options;
  options.baseline_k = config.baseline_k;
  options.bootstrap_b = config.bootstrap_b;
  options.seed = config.seed;
  options.workers = config.workers;

  std::vector<RatioRow> rows;
  ojson diagnostics = ojson::object();
  for (const auto& corpus : corpora.corpora) {
    std::vector<CrossRef> usable;
    std::size_t unresolved[3] = {0, 0, 0};
    for (const auto& r : refs) {
      if (resolves(corpus, r)) {
        usable.push_back(r);
      } else {
        ++unresolved[static_cast<int>(r.scope)];
      }
    }

    // Every vector a reference or its baselines could touch.
    std::set<VerseRef> needed;
    for (const auto& r : usable) {
      for (const auto* v : {&r.pair.first, &r.pair.second}) {
        for (auto& c : corpus.chapter_verses(v->book, v->chapter)) needed.insert(std::move(c));
      }
    }
    std::vector<std::string> missing;
    std::size_t missing_total = 0;
    for (const auto& v : needed) {
      if (!store.contains(corpus.id(), v)) {
        if (missing.size() < 20) missing.push_back(embedding_key(corpus.id(), v));
        ++missing_total;
      }
    }
    if (missing_total) {
      std::string list;
      for (const auto& m : missing) list += "\n  " + m;
      throw MissingEmbeddingError(
          fmt::format("{} embeddings missing for corpus '{}'; first {}:{}", missing_total, corpus.id(), missing.size(), list));
    }

    auto results = compute_ratio_set(usable, corpus, store, options);
    std::size_t no_baseline = 0;
    for (auto& r : results) {
      no_baseline += r.dropped;
      r.dropped += unresolved[static_cast<int>(r.scope)];
      rows.push_back({corpus.id(), corpus.provenance(), corpus.language(), std::move(r)});
    }
    diagnostics[corpus.id()] = {{"unresolved_refs", unresolved[0] + unresolved[1] + unresolved[2]},
                                {"no_baseline_refs", no_baseline}};
  }

  ojson analysis{{"threshold", config.threshold},
                 {"baseline_k", config.baseline_k},
                 {"bootstrap_b", config.bootstrap_b},
                 {"seed", config.seed},
                 {"refs", refs.size()}};
  ojson report{{"tool", "intertext"}, {"version", kToolVersion}, {"analysis", analysis}};
  ojson results = ojson::array();
  std::ostringstream csv;
  csv << "corpus_id,provenance,language,scope,ratio,ci_low,ci_high,n_refs,dropped,seed\n";
  for (const auto& row : rows) {
    const auto& r = row.result;
    results.push_back({{"corpus_id", row.corpus_id},
                       {"provenance", to_string(row.provenance)},
                       {"language", row.language},
                       {"scope", to_string(r.scope)},
                       {"ratio", r.ratio},
                       {"ci_low", r.ci_low},
                       {"ci_high", r.ci_high},
                       {"half_width", r.half_width()},
                       {"n_refs", r.n_refs},
                       {"dropped", r.dropped},
                       {"baseline_k", r.baseline_k},
                       {"bootstrap_b", r.bootstrap_b},
                       {"seed", r.seed}});
    csv << row.corpus_id << ',' << to_string(row.provenance) << ',' << row.language << ',' << to_string(r.scope)
        << ',' << render_number(r.ratio) << ',' << render_number(r.ci_low) << ',' << render_number(r.ci_high) << ','
        << r.n_refs << ',' << r.dropped << ',' << r.seed << '\n';
  }
  report["results"] = std::move(results);
  report["diagnostics"] = std::move(diagnostics);
  if (!scores.empty()) {
    ojson ledger = ojson::array();
    for (const auto& s : scores) ledger.push_back({{"source", s.source}, {"target_lang", s.target_lang}, {"score", s.score}});
    report["quality_scores"] = std::move(ledger);
  }

  auto dir = out_dir(config);
  write_text(dir / "ratios.json", report.dump(2) + "\n");
  write_text(dir / "ratios.csv", csv.str());
  return rows;
}

std::vector<ShiftRecord> cmd_shift(const AnalysisConfig& config) {
  if (config.shift_source.empty() || config.shift_target.empty()) {
    throw ConfigError("shift needs a source and a target corpus");
  }
  auto corpora = load_corpora(config);
  const auto& source = corpora.get(config.shift_source);
  const auto& target = corpora.get(config.shift_target);
  auto refs = configured_refs(config, corpora);
  std::erase_if(refs, [&](const CrossRef& r) { return !resolves(source, r) || !resolves(target, r); });
  auto store = configured_store(config);

  auto table = shift_table(refs, store, source.id(), target.id());
  if (table.size() > config.top_n) table.resize(config.top_n);

  std::ostringstream tsv;
  tsv << "rank\tfirst\tsecond\tscope\tvotes\tsim_source\tsim_target\tdelta\t"
         "first_source_text\tsecond_source_text\tfirst_target_text\tsecond_target_text\n";
  std::size_t rank = 0;
  for (const auto& rec : table) {
    const auto& p = rec.ref.pair;
    tsv << ++rank << '\t' << p.first.str() << '\t' << p.second.str() << '\t' << to_string(rec.ref.scope) << '\t'
        << rec.ref.votes << '\t' << render_number(rec.sim_source) << '\t' << render_number(rec.sim_target) << '\t'
        << render_number(rec.delta) << '\t' << *source.resolve(p.first) << '\t' << *source.resolve(p.second) << '\t'
        << *target.resolve(p.first) << '\t' << *target.resolve(p.second) << '\n';
  }
  write_text(out_dir(config) / fmt::format("shift_{}_{}.tsv", source.id(), target.id()), tsv.str());
  return table;
}

std::vector<RatioRow> read_ratio_rows(const std::string& ratios_json_path) {
  require_file(ratios_json_path, "ratio report");
  std::ifstream in(ratios_json_path);
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("results") || !j["results"].is_array()) {
    throw ValidationError(fmt::format("'{}' is not a ratio report", ratios_json_path));
  }
  std::vector<RatioRow> rows;
  try {
    for (const auto& r : j["results"]) {
      RatioRow row;
      row.corpus_id = r.at("corpus_id").get<std::string>();
      row.provenance = parse_provenance(r.at("provenance").get<std::string>());
      row.language = r.at("language").get<std::string>();
      row.result.corpus_id = row.corpus_id;
      row.result.scope = parse_scope(r.at("scope").get<std::string>());
      row.result.ratio = r.at("ratio").get<double>();
      row.result.ci_low = r.at("ci_low").get<double>();
      row.result.ci_high = r.at("ci_high").get<double>();
      row.result.n_refs = r.at("n_refs").get<std::size_t>();
      row.result.dropped = r.at("dropped").get<std::size_t>();
      row.result.baseline_k = r.at("baseline_k").get<std::size_t>();
      row.result.bootstrap_b = r.at("bootstrap_b").get<std::size_t>();
      row.result.seed = r.at("seed").get<std::uint64_t>();
      rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("'{}': {}", ratios_json_path, e.what()));
  } catch (const ParseError& e) {
    throw ValidationError(fmt::format("'{}': {}", ratios_json_path, e.what()));
  }
  return rows;
}

std::string cmd_chart(const AnalysisConfig& config) {
  auto rows = read_ratio_rows((fs::path(config.out) / "ratios.json").string());
  auto svg = render_chart(rows);
  write_text(out_dir(config) / "ratios.svg", svg);
  return svg;
}

std::vector<QualityScore> cmd_scores(const AnalysisConfig& config) {
  require_file(config.scores, "quality score file");
  std::ifstream in(config.scores);
  auto scores = parse_scores(in);
  ojson ledger = ojson::array();
  for (const auto& s : scores) ledger.push_back({{"source", s.source}, {"target_lang", s.target_lang}, {"score", s.score}});
  write_text(out_dir(config) / "scores.json", ojson{{"quality_scores", ledger}}.dump(2) + "\n");
  return scores;
}

EmbeddingStore cmd_embed(const AnalysisConfig& config) {
  if (config.embed_endpoint.empty()) throw ConfigError("config does not name an 'embed_endpoint'");
  auto corpora = load_corpora(config);
  RemoteOptions options;
  options.batch_size = config.embed_batch;
  options.retries = config.embed_retries;
  options.timeout = std::chrono::milliseconds(config.embed_timeout_ms);
  options = remote_options_from_env(options);

  std::optional<EmbeddingStore> store;
  for (const auto& corpus : corpora.corpora) {
    std::vector<std::string> texts;
    std::vector<VerseRef> keys;
    for (const auto& [ref, text] : corpus.verses()) {
      keys.push_back(ref);
      texts.push_back(text);
    }
    if (texts.empty()) continue;
    auto vectors = fetch_remote(texts, config.embed_endpoint, options);
    if (!store) store.emplace(static_cast<std::uint32_t>(vectors.front().size()));
    for (std::size_t i = 0; i < keys.size(); ++i) store->insert(corpus.id(), keys[i], vectors[i]);
  }
  if (!store) throw ValidationError("no verses to embed");

  auto path = config.embeddings.empty() ? (out_dir(config) / "embeddings.itxe").string() : config.embeddings.front();
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  save_store_file(*store, path);
  return std::move(*store);
}

TranslationRun cmd_translate(const AnalysisConfig& config, ChatClient& client) {
  if (config.translate_id.empty()) throw ConfigError("translate needs 'translate_id'");
  if (config.source_lang_name.empty() || config.target_lang_name.empty()) {
    throw ConfigError("translate needs 'source_lang_name' and 'target_lang_name'");
  }
  auto corpora = load_corpora(config);
  const auto& source = corpora.get(config.translate_source);
  const auto& parallel = corpora.get(config.translate_parallel);

  GenerationConfig gen;
  gen.endpoint = config.llm_endpoint;
  gen.model_name = config.llm_model;
  gen.max_new_tokens = config.max_new_tokens;
  gen.retries = config.llm_retries;
  gen.timeout = std::chrono::milliseconds(config.llm_timeout_ms);

  TranslationJob job;
  job.output_id = config.translate_id;
  job.output_language = config.translate_language.empty() ? parallel.language() : config.translate_language;
  job.source_lang_name = config.source_lang_name;
  job.target_lang_name = config.target_lang_name;
  job.per_verse_exemplars = config.per_verse_exemplars;
  job.max_in_flight = config.max_in_flight;

  auto run = translate_corpus(source, parallel, client, gen, job, config.seed);
  auto dir = out_dir(config);
  std::ostringstream tsv, failures;
  write_corpus(run.corpus, tsv);
  write_failure_report(run, failures);
  write_text(dir / (config.translate_id + ".tsv"), tsv.str());
  write_text(dir / (config.translate_id + ".failures.jsonl"), failures.str());
  return run;
}

void write_run_json(const AnalysisConfig& config, std::string_view command) {
  ojson cfg = ojson::object();
  for (const auto& [k, v] : config.to_pairs()) cfg[k] = v;
  ojson j{{"tool", "intertext"}, {"version", kToolVersion}, {"command", command}, {"config", cfg}};
  write_text(out_dir(config) / "run.json", j.dump(2) + "\n");
}

}  // namespace intertext
