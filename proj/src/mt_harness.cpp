// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#include "intertext/mt_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "intertext/error.hpp"
#include "intertext/http.hpp"
#include "intertext/rng.hpp"
#include "text_util.hpp"

namespace intertext {
namespace {

void check_insertable(std::string_view text, const char* what) {
  if (detail::trim(text).empty()) throw ValidationError(fmt::format("{} is empty", what));
  if (text.find('"') != std::string_view::npos) {
    throw QuoteCollisionError(fmt::format("{} contains a double quote: {}", what, text));
  }
}

/// Collapses whitespace runs that contain a TAB, CR or LF into one space.
std::string single_line(std::string_view text) {
  std::string out;
  bool pending_break = false;
  for (char c : text) {
    if (c == '\t' || c == '\r' || c == '\n') {
      pending_break = true;
      continue;
    }
    if (pending_break) {
      if (!out.empty() && out.back() != ' ' && c != ' ') out += ' ';
      pending_break = false;
    }
    out += c;
  }
  return out;
}

}  // namespace

std::string build_prompt(const PromptTemplate& prompt, std::string_view input_text) {
  const auto& src = prompt.source_lang_name;
  const auto& tgt = prompt.target_lang_name;
  if (detail::trim(src).empty() || detail::trim(tgt).empty()) throw ValidationError("language names must be set");
  check_insertable(input_text, "input text");

  std::string out = fmt::format("Translate the following {} phrases into {}:\n\n", src, tgt);
  int n = 1;
  for (const auto& ex : prompt.exemplars) {
    check_insertable(ex.source_text, "exemplar source text");
    check_insertable(ex.target_text, "exemplar target text");
    out += fmt::format("{}. {}: \"{}\"\n\n{}: \"{}\"\n\n", n++, src, ex.source_text, tgt, ex.target_text);
  }
  out += fmt::format("Now, translate this {} phrase:\n\n", src);
  out += fmt::format("{}. {}: \"{}\"\n\n{}:", n, src, input_text, tgt);
  return out;
}

std::string typographic_quotes(std::string_view text) {
  std::string out;
  bool open = true;
  for (char c : text) {
    if (c == '"') {
      out += open ? "“" : "”";
      open = !open;
    } else {
      out += c;
    }
  }
  return out;
}

Extraction extract_translation(std::string_view raw_output) {
  Extraction out;
  auto open = raw_output.find('"');
  if (open == std::string_view::npos) {
    out.used_fallback = true;
    out.text = std::string(detail::trim(raw_output.substr(0, raw_output.find('\n'))));
  } else {
    auto close = raw_output.find('"', open + 1);
    if (close == std::string_view::npos) {
      // Unterminated span: keep its first line.
      out.used_fallback = true;
      auto rest = raw_output.substr(open + 1);
      out.text = std::string(detail::trim(rest.substr(0, rest.find('\n'))));
    } else {
      out.text = std::string(detail::trim(raw_output.substr(open + 1, close - open - 1)));
    }
  }
  if (out.text.empty()) throw EmptyTranslationError("model output yielded an empty translation");
  return out;
}

namespace {

/// Four distinct indices in [0, n), by a partial Fisher-Yates shuffle over a
/// virtual identity array.
std::array<std::size_t, 4> draw_four(std::size_t n, std::uint64_t seed) {
  if (n < 4) throw InsufficientExemplarsError(fmt::format("need 4 exemplar pairs, pool has {}", n));
  std::map<std::size_t, std::size_t> swapped;
  auto value_at = [&](std::size_t i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  auto stream = RandomStream::derive(seed, "exemplars", 0);
  std::array<std::size_t, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    auto j = i + static_cast<std::size_t>(stream.below(n - i));
    auto vi = value_at(i);
    auto vj = value_at(j);
    swapped[i] = vj;
    swapped[j] = vi;
    out[i] = vj;
  }
  return out;
}

}  // namespace

std::array<Exemplar, 4> select_exemplars(std::span<const Exemplar> pool, std::uint64_t seed) {
  auto idx = draw_four(pool.size(), seed);
  return {pool[idx[0]], pool[idx[1]], pool[idx[2]], pool[idx[3]]};
}

HttpChatClient::HttpChatClient(GenerationConfig config) : config_(std::move(config)) {
  if (config_.token.empty()) {
    if (const char* token = std::getenv("INTERTEXT_LLM_TOKEN")) config_.token = token;
  }
}

std::string HttpChatClient::complete(const std::string& prompt, int max_new_tokens) {
  nlohmann::json body{{"model", config_.model_name}, {"prompt", prompt}, {"max_new_tokens", max_new_tokens}};
  auto res = post_json(config_.endpoint, body.dump(), config_.token, config_.timeout);
  if (res.status != 200) throw RemoteError(fmt::format("chat service returned HTTP {}", res.status));
  auto j = nlohmann::json::parse(res.body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("text") || !j["text"].is_string()) {
    throw ProtocolError("chat response lacks a string 'text' field");
  }
  return j["text"].get<std::string>();
}

namespace {

struct PoolEntry {
  VerseRef ref;
  Exemplar pair;
};

/// Exemplars for the verse at `skip` in the pool, drawn from the rest.
std::array<Exemplar, 4> exemplars_excluding(const std::vector<PoolEntry>& pool, std::size_t skip,
                                            std::uint64_t seed) {
  if (pool.empty()) throw InsufficientExemplarsError("need 4 exemplar pairs, pool is empty");
  auto idx = draw_four(pool.size() - 1, seed);
  std::array<Exemplar, 4> out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = pool[idx[i] >= skip ? idx[i] + 1 : idx[i]].pair;
  return out;
}

}  // namespace

TranslationRun translate_corpus(const Corpus& source, const Corpus& parallel, ChatClient& client,
                                const GenerationConfig& config, const TranslationJob& job, std::uint64_t seed) {
  if (config.max_new_tokens < 1) throw ConfigError("max_new_tokens must be >= 1");
  if (config.retries < 0) throw ConfigError("retries must be >= 0");

  std::vector<PoolEntry> pool;
  for (const auto& [ref, text] : source.verses()) {
    if (auto tgt = parallel.resolve(ref)) {
      pool.push_back({ref, {typographic_quotes(text), typographic_quotes(*tgt)}});
    }
  }

  // One exemplar set per run; verses that belong to it get their own draw.
  const auto run_idx = draw_four(pool.size(), seed);
  std::array<Exemplar, 4> run_exemplars;
  std::map<VerseRef, std::size_t> pool_pos;
  for (std::size_t i = 0; i < pool.size(); ++i) pool_pos.emplace(pool[i].ref, i);
  for (std::size_t i = 0; i < 4; ++i) run_exemplars[i] = pool[run_idx[i]].pair;
  auto in_run_set = [&](std::size_t pos) { return std::find(run_idx.begin(), run_idx.end(), pos) != run_idx.end(); };

  std::vector<VerseRef> refs;
  for (const auto& [ref, text] : source.verses()) refs.push_back(ref);

  std::map<VerseRef, std::string> translated;
  TranslationRun run;
  std::mutex mu;
  std::atomic<std::size_t> next{0};

  auto translate_some = [&] {
    for (std::size_t i = next++; i < refs.size(); i = next++) {
      const auto& ref = refs[i];
      PromptTemplate prompt{job.source_lang_name, job.target_lang_name, run_exemplars};
      if (auto pos = pool_pos.find(ref); pos != pool_pos.end() && (job.per_verse_exemplars || in_run_set(pos->second))) {
        prompt.exemplars =
            exemplars_excluding(pool, pos->second, RandomStream::derive(seed, "verse", fnv1a64(ref.str())).next());
      }
      const auto text = build_prompt(prompt, typographic_quotes(*source.resolve(ref)));

      std::string reason;
      int attempts = 0;
      bool ok = false;
      bool fallback = false;
      std::string result;
      for (; attempts <= config.retries && !ok;) {
        ++attempts;
        try {
          auto extraction = extract_translation(client.complete(text, config.max_new_tokens));
          result = single_line(extraction.text);
          fallback = extraction.used_fallback;
          ok = true;
        } catch (const Error& e) {
          reason = e.what();
        }
      }

      std::lock_guard lock(mu);
      if (ok) {
        translated.emplace(ref, std::move(result));
        if (fallback) ++run.fallback_extractions;
      } else {
        run.failures.push_back({ref, reason, attempts});
      }
    }
  };

  std::exception_ptr fatal;
  auto work = [&] {
    try {
      translate_some();
    } catch (...) {
      std::lock_guard lock(mu);
      if (!fatal) fatal = std::current_exception();
      next = refs.size();
    }
  };

  const unsigned workers = std::max(1u, job.max_in_flight);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  std::sort(run.failures.begin(), run.failures.end(),
            [](const TranslationFailure& a, const TranslationFailure& b) { return a.ref < b.ref; });
  run.corpus = Corpus(job.output_id, job.output_language, Provenance::machine,
                      Corpus::VerseMap(translated.begin(), translated.end()));
  return run;
}

void write_failure_report(const TranslationRun& run, std::ostream& out) {
  for (const auto& f : run.failures) {
    nlohmann::json j{{"corpus", run.corpus.id()}, {"ref", f.ref.str()}, {"reason", f.reason}, {"attempts", f.attempts}};
    out << j.dump() << '\n';
  }
}

}  // namespace intertext
