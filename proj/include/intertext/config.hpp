// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "intertext/corpus.hpp"

namespace intertext {

struct CorpusSpec {
  std::string id;
  std::string path;
  std::string language;
  Provenance provenance = Provenance::original;
  std::string versification;  // optional map path
};

/// Everything one analysis run needs. Read from a `key = value` file where
/// corpora are declared as `corpus.<id>.path`, `corpus.<id>.language`, ...;
/// relative paths resolve against the file's directory.
struct AnalysisConfig {
  std::vector<CorpusSpec> corpora;
  std::string testaments;    // empty: the standard 66-book split
  std::string crossrefs;
  std::string book_aliases;  // optional, layered over the standard table
  std::vector<std::string> resolve_in;  // corpus ids; empty: all corpora
  std::string refs_file;     // pre-filtered refs; empty: recompute

  long long threshold = 50;
  std::size_t baseline_k = 1;
  std::size_t bootstrap_b = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 1;

  std::vector<std::string> embeddings;  // ITXE files
  std::string embed_endpoint;
  std::size_t embed_batch = 32;
  int embed_retries = 2;
  long long embed_timeout_ms = 30000;

  std::string scores;
  std::string out = "out";

  std::string shift_source;
  std::string shift_target;
  std::size_t top_n = 20;

  std::string llm_endpoint;
  std::string llm_model;
  int max_new_tokens = 100;
  int llm_retries = 2;
  long long llm_timeout_ms = 120000;
  std::string translate_source;
  std::string translate_parallel;
  std::string translate_id;
  std::string translate_language;
  std::string source_lang_name;
  std::string target_lang_name;
  bool per_verse_exemplars = false;
  unsigned max_in_flight = 1;

  const CorpusSpec& corpus(const std::string& id) const;

  /// Applies one `key`/`value` setting; relative paths resolve against `base_dir`.
  void set(const std::string& key, const std::string& value, const std::string& base_dir = "");

  /// Flat key/value view, the inverse of `set` for an absolute-path config.
  std::vector<std::pair<std::string, std::string>> to_pairs() const;
};

/// Parses the `key = value` format. `#` starts a comment line.
AnalysisConfig parse_config(std::istream& in, const std::string& base_dir = "");

/// Reads a key/value config, or the `config` object of a run.json.
AnalysisConfig load_config(const std::string& path);

}  // namespace intertext
