// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intertext/corpus.hpp"

namespace intertext {

struct Exemplar {
  std::string source_text;
  std::string target_text;

  friend bool operator==(const Exemplar&, const Exemplar&) = default;
};

struct PromptTemplate {
  std::string source_lang_name;  // e.g. "Ancient Greek"
  std::string target_lang_name;  // e.g. "English"
  std::array<Exemplar, 4> exemplars;
};

/// Few-shot prompt: header, four numbered exemplars, then the input as item
/// 5, ending with the bare `{target}:` cue.
///
/// Throws ValidationError on empty input or exemplar text and
/// QuoteCollisionError when any inserted text contains `"`.
std::string build_prompt(const PromptTemplate& prompt, std::string_view input_text);

/// Replaces ASCII double quotes with typographic ones, alternating open and
/// close, so the text can sit inside a quoted prompt item.
std::string typographic_quotes(std::string_view text);

struct Extraction {
  std::string text;
  bool used_fallback = false;
};

/// Contents of the first `"..."` span. Without an opening quote, the first
/// line, trimmed. Throws EmptyTranslationError when nothing is left.
Extraction extract_translation(std::string_view raw_output);

/// Four distinct pairs drawn uniformly without replacement.
std::array<Exemplar, 4> select_exemplars(std::span<const Exemplar> pool, std::uint64_t seed);

/// Narrow chat-completion interface; implementations must be safe to call
/// from several threads.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const std::string& prompt, int max_new_tokens) = 0;
};

struct GenerationConfig {
  std::string endpoint;
  std::string model_name;
  int max_new_tokens = 100;
  int retries = 2;
  std::chrono::milliseconds timeout{120000};
  std::string token;
};

/// POSTs `{"model", "prompt", "max_new_tokens"}` and reads `{"text"}`.
class HttpChatClient : public ChatClient {
 public:
  /// Takes the bearer token from INTERTEXT_LLM_TOKEN when `config.token` is empty.
  explicit HttpChatClient(GenerationConfig config);
  std::string complete(const std::string& prompt, int max_new_tokens) override;

 private:
  GenerationConfig config_;
};

struct TranslationJob {
  std::string output_id;
  std::string output_language;
  std::string source_lang_name;
  std::string target_lang_name;
  /// Draw fresh exemplars for every verse instead of once per run.
  bool per_verse_exemplars = false;
  unsigned max_in_flight = 1;
};

struct TranslationFailure {
  VerseRef ref;
  std::string reason;
  int attempts = 0;
};

struct TranslationRun {
  Corpus corpus;  // provenance machine
  std::vector<TranslationFailure> failures;
  std::size_t fallback_extractions = 0;
};

/// Translates every verse of `source`. Exemplar pairs come from verses that
/// `source` and `parallel` share, never including the verse being
/// translated. Failed verses are left out and listed.
TranslationRun translate_corpus(const Corpus& source, const Corpus& parallel, ChatClient& client,
                                const GenerationConfig& config, const TranslationJob& job, std::uint64_t seed);

/// One JSON object per line: corpus, ref, reason, attempts.
void write_failure_report(const TranslationRun& run, std::ostream& out);

}  // namespace intertext
