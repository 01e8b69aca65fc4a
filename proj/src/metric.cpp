// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#include "intertext/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "intertext/error.hpp"

namespace intertext {

RandomStream baseline_stream(std::uint64_t seed, const CrossRef& ref) {
  return RandomStream::derive(seed, "baseline", fnv1a64(ref.pair.key()));
}

namespace {

std::vector<VerseRef> candidates(const Corpus& corpus, const VerseRef& swapped, const VerseRef& other) {
  auto verses = corpus.chapter_verses(swapped.book, swapped.chapter);
  std::erase_if(verses, [&](const VerseRef& v) { return v == swapped || v == other; });
  return verses;
}

}  // namespace

std::optional<std::vector<BaselineDraw>> sample_baseline(const CrossRef& ref, const Corpus& corpus,
                                                         RandomStream& stream, std::size_t k) {
  if (k == 0) throw ConfigError("baseline sample count must be >= 1");
  const auto& a = ref.pair.first;
  const auto& b = ref.pair.second;
  if (!corpus.resolve(a) || !corpus.resolve(b)) {
    throw ValidationError(fmt::format("reference {} does not resolve in corpus '{}'", ref.pair.key(), corpus.id()));
  }
  const std::vector<VerseRef> pool[2] = {candidates(corpus, a, b), candidates(corpus, b, a)};
  if (pool[0].empty() && pool[1].empty()) return std::nullopt;

  std::vector<BaselineDraw> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto side = static_cast<std::size_t>(stream.below(2));
    if (pool[side].empty()) side = 1 - side;
    const auto& choices = pool[side];
    out.push_back({side == 0 ? Side::first : Side::second, choices[stream.below(choices.size())]});
  }
  return out;
}

double intertextuality_ratio(std::span<const double> ref_sims, std::span<const double> baseline_sims) {
  if (ref_sims.empty() || baseline_sims.empty()) throw ValidationError("ratio needs non-empty similarity lists");
  const double ref_mean = std::accumulate(ref_sims.begin(), ref_sims.end(), 0.0) / ref_sims.size();
  const double base_mean = std::accumulate(baseline_sims.begin(), baseline_sims.end(), 0.0) / baseline_sims.size();
  if (!(base_mean > 0.0)) {
    throw DegenerateBaselineError(fmt::format("baseline mean similarity {} is not positive", base_mean));
  }
  return ref_mean / base_mean;
}

double sample_ratio(std::span<const PairedSample> samples) {
  std::vector<double> refs, bases;
  refs.reserve(samples.size());
  for (const auto& s : samples) {
    refs.push_back(s.ref_sim);
    bases.insert(bases.end(), s.baseline_sims.begin(), s.baseline_sims.end());
  }
  return intertextuality_ratio(refs, bases);
}

std::vector<double> bootstrap_replicates(std::span<const PairedSample> samples, const BootstrapOptions& options) {
  if (samples.empty()) throw ValidationError("bootstrap needs at least one sample");
  if (options.replicates == 0) throw ConfigError("bootstrap replicate count must be >= 1");

  const std::size_t n = samples.size();
  std::vector<double> ref_sim(n), base_sum(n), base_count(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (samples[i].baseline_sims.empty()) throw ValidationError("sample without baseline similarities");
    ref_sim[i] = samples[i].ref_sim;
    base_sum[i] = std::accumulate(samples[i].baseline_sims.begin(), samples[i].baseline_sims.end(), 0.0);
    base_count[i] = static_cast<double>(samples[i].baseline_sims.size());
  }

  auto replicate = [&](std::size_t r) {
    for (int attempt = 0; attempt <= options.max_redraws; ++attempt) {
      auto stream = attempt == 0 ? RandomStream::derive(options.seed, "bootstrap", r)
                                 : RandomStream::derive(options.seed, fmt::format("bootstrap-redraw-{}", attempt), r);
      double refs = 0.0, bases = 0.0, count = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        auto pick = static_cast<std::size_t>(stream.below(n));
        refs += ref_sim[pick];
        bases += base_sum[pick];
        count += base_count[pick];
      }
      if (bases > 0.0) return (refs / static_cast<double>(n)) / (bases / count);
    }
    throw DegenerateBaselineError(
        fmt::format("bootstrap replicate {} kept a non-positive baseline mean after {} redraws", r,
                    options.max_redraws));
  };

  std::vector<double> out(options.replicates);
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, options.replicates));
  if (workers == 1) {
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = replicate(r);
    return out;
  }

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  const std::size_t chunk = (out.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t r = w * chunk; r < std::min(out.size(), (w + 1) * chunk); ++r) out[r] = replicate(r);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double nearest_rank(std::span<const double> sorted, std::uint64_t numerator, std::uint64_t denominator) {
  if (sorted.empty()) throw ValidationError("percentile of an empty list");
  const std::uint64_t n = sorted.size();
  std::uint64_t rank = (numerator * n + denominator - 1) / denominator;
  rank = std::clamp<std::uint64_t>(rank, 1, n);
  return sorted[rank - 1];
}

Interval bootstrap_ci(std::span<const PairedSample> samples, const BootstrapOptions& options) {
  auto ratios = bootstrap_replicates(samples, options);
  std::sort(ratios.begin(), ratios.end());
  return {nearest_rank(ratios, 25, 1000), nearest_rank(ratios, 975, 1000)};
}

SampleSet build_samples(std::span<const CrossRef> refs, const Corpus& corpus, const EmbeddingStore& store,
                        std::size_t k, std::uint64_t seed) {
  std::vector<CrossRef> ordered(refs.begin(), refs.end());
  std::sort(ordered.begin(), ordered.end(), [](const CrossRef& x, const CrossRef& y) { return x.pair < y.pair; });

  SampleSet out;
  const auto& id = corpus.id();
  for (const auto& ref : ordered) {
    auto stream = baseline_stream(seed, ref);
    auto draws = sample_baseline(ref, corpus, stream, k);
    if (!draws) {
      out.excluded.push_back(ref);
      continue;
    }
    PairedSample s{ref, store.similarity(id, ref.pair.first, ref.pair.second), {}, std::move(*draws)};
    s.baseline_sims.reserve(s.baselines.size());
    for (const auto& d : s.baselines) {
      const auto& kept = d.swapped == Side::first ? ref.pair.second : ref.pair.first;
      s.baseline_sims.push_back(store.similarity(id, kept, d.replacement));
    }
    out.samples.push_back(std::move(s));
  }
  return out;
}

std::vector<RatioResult> compute_ratio_set(std::span<const CrossRef> refs, const Corpus& corpus,
                                           const EmbeddingStore& store, const RatioOptions& options) {
  auto set = build_samples(refs, corpus, store, options.baseline_k, options.seed);

  std::vector<RatioResult> results;
  for (auto scope : kAllScopes) {
    std::vector<PairedSample> scoped;
    for (const auto& s : set.samples) {
      if (s.ref.scope == scope) scoped.push_back(s);
    }
    if (scoped.empty()) continue;
    auto dropped = std::count_if(set.excluded.begin(), set.excluded.end(),
                                 [scope](const CrossRef& r) { return r.scope == scope; });

    BootstrapOptions boot;
    boot.replicates = options.bootstrap_b;
    boot.seed = RandomStream::derive(options.seed, to_string(scope), 0).next();
    boot.workers = options.workers;
    auto ci = bootstrap_ci(scoped, boot);

    RatioResult r;
    r.corpus_id = corpus.id();
    r.scope = scope;
    r.ratio = sample_ratio(scoped);
    r.ci_low = ci.low;
    r.ci_high = ci.high;
    r.n_refs = scoped.size();
    r.dropped = static_cast<std::size_t>(dropped);
    r.baseline_k = options.baseline_k;
    r.bootstrap_b = options.bootstrap_b;
    r.seed = options.seed;
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<ShiftRecord> shift_table(std::span<const CrossRef> refs, const EmbeddingStore& store,
                                     const std::string& source_corpus, const std::string& target_corpus) {
  std::vector<ShiftRecord> out;
  out.reserve(refs.size());
  for (const auto& ref : refs) {
    ShiftRecord rec{ref, store.similarity(source_corpus, ref.pair.first, ref.pair.second),
                    store.similarity(target_corpus, ref.pair.first, ref.pair.second), 0.0};
    rec.delta = rec.sim_target - rec.sim_source;
    out.push_back(std::move(rec));
  }
  std::sort(out.begin(), out.end(), [](const ShiftRecord& x, const ShiftRecord& y) { return x.ref.pair < y.ref.pair; });
  std::stable_sort(out.begin(), out.end(),
                   [](const ShiftRecord& x, const ShiftRecord& y) { return std::abs(x.delta) > std::abs(y.delta); });
  return out;
}

}  // namespace intertext
