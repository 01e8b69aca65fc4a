// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "intertext/config.hpp"
#include "intertext/corpus.hpp"
#include "intertext/crossref.hpp"
#include "intertext/embed_store.hpp"
#include "intertext/metric.hpp"
#include "intertext/mt_harness.hpp"

namespace intertext {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Shortest decimal that reads back to the same double. CSV and JSON
/// outputs both go through this, so their digits always agree.
std::string render_number(double x);

struct LoadedCorpora {
  std::vector<Corpus> corpora;  // config order, versification applied
  /// One line per versification source missing from its corpus.
  std::vector<std::string> warnings;

  const Corpus& get(const std::string& id) const;
};

LoadedCorpora load_corpora(const AnalysisConfig& config);

struct RefsSummary {
  std::size_t total = 0;
  std::size_t within_jewish = 0;
  std::size_t within_christian = 0;
  std::size_t across = 0;
  std::size_t skipped_ranges = 0;
  std::size_t unresolvable = 0;
  std::size_t below_threshold = 0;
  std::size_t same_book = 0;
  std::size_t merged_duplicates = 0;
  std::size_t self_links = 0;
};

struct RefsOutcome {
  std::vector<CrossRef> refs;
  RefsSummary summary;
};

/// Parse, fold, filter and label the cross-reference file.
RefsOutcome run_refs_pipeline(const AnalysisConfig& config, const LoadedCorpora& corpora);

/// Writes `refs.tsv` and `refs_summary.json` under `config.out`.
RefsSummary cmd_refs(const AnalysisConfig& config);

struct RatioRow {
  std::string corpus_id;
  Provenance provenance = Provenance::original;
  std::string language;
  RatioResult result;
};

struct QualityScore {
  std::string source;
  std::string target_lang;
  double score = 0.0;
};

/// Reads `source,target_lang,score` rows (an optional header is skipped).
std::vector<QualityScore> parse_scores(std::istream& in);

/// Writes `ratios.json` and `ratios.csv` under `config.out`.
std::vector<RatioRow> cmd_ratio(const AnalysisConfig& config);

/// Writes `shift_<source>_<target>.tsv` under `config.out` and returns the
/// rows written.
std::vector<ShiftRecord> cmd_shift(const AnalysisConfig& config);

/// Standalone grouped bar chart: one group per scope, one bar per corpus,
/// with interval whiskers. Throws ValidationError on empty or inconsistent
/// rows.
std::string render_chart(const std::vector<RatioRow>& rows);

/// Reads rows back from a `ratios.json`.
std::vector<RatioRow> read_ratio_rows(const std::string& ratios_json_path);

/// Renders `ratios.json` under `config.out` into `ratios.svg`.
std::string cmd_chart(const AnalysisConfig& config);

/// Copies the external quality-score CSV into `scores.json`.
std::vector<QualityScore> cmd_scores(const AnalysisConfig& config);

/// Fetches embeddings for every configured corpus and writes the ITXE file
/// named by `embeddings` (default `<out>/embeddings.itxe`).
EmbeddingStore cmd_embed(const AnalysisConfig& config);

/// Machine-translates `translate_source`, writing `<out>/<translate_id>.tsv`
/// and `<out>/<translate_id>.failures.jsonl`.
TranslationRun cmd_translate(const AnalysisConfig& config, ChatClient& client);

/// `run.json`: tool, version, command and the full config.
void write_run_json(const AnalysisConfig& config, std::string_view command);

}  // namespace intertext
