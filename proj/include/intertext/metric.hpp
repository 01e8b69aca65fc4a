// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intertext/corpus.hpp"
#include "intertext/crossref.hpp"
#include "intertext/embed_store.hpp"
#include "intertext/rng.hpp"

namespace intertext {

enum class Side { first, second };

/// One baseline pair: the reference with `swapped` replaced by `replacement`.
struct BaselineDraw {
  Side swapped = Side::first;
  VerseRef replacement;

  friend bool operator==(const BaselineDraw&, const BaselineDraw&) = default;
};

/// The stream `sample_baseline` uses for `ref` under `seed`. Depends only on
/// the pair, not on its position in any list.
RandomStream baseline_stream(std::uint64_t seed, const CrossRef& ref);

/// Draws `k` baseline pairs for `ref`. Each draw picks a side uniformly and
/// replaces that verse with another verse of the same chapter, never the
/// verse itself nor the pair's other endpoint. A side whose chapter offers
/// no candidate falls back to the other side; nullopt when neither side has
/// one.
std::optional<std::vector<BaselineDraw>> sample_baseline(const CrossRef& ref, const Corpus& corpus,
                                                         RandomStream& stream, std::size_t k);

struct PairedSample {
  CrossRef ref;
  double ref_sim = 0.0;
  std::vector<double> baseline_sims;
  std::vector<BaselineDraw> baselines;
};

/// mean(ref_sims) / mean(baseline_sims). Throws DegenerateBaselineError when
/// the baseline mean is not positive.
double intertextuality_ratio(std::span<const double> ref_sims, std::span<const double> baseline_sims);

/// Point ratio over paired samples, all baselines pooled.
double sample_ratio(std::span<const PairedSample> samples);

struct BootstrapOptions {
  std::size_t replicates = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  /// Fresh-substream redraws allowed for a replicate with a non-positive
  /// baseline mean.
  int max_redraws = 16;
};

/// Ratio of each paired resample, indexed by replicate. Replicate r draws
/// only from streams derived from (seed, r).
std::vector<double> bootstrap_replicates(std::span<const PairedSample> samples, const BootstrapOptions& options);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Nearest-rank percentile of an ascending list: element ceil(q * n), 1-based,
/// with q = numerator / denominator.
double nearest_rank(std::span<const double> sorted, std::uint64_t numerator, std::uint64_t denominator);

/// 95% percentile interval (2.5th and 97.5th nearest-rank percentiles).
Interval bootstrap_ci(std::span<const PairedSample> samples, const BootstrapOptions& options);

struct RatioOptions {
  std::size_t baseline_k = 1;
  std::size_t bootstrap_b = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct RatioResult {
  std::string corpus_id;
  Scope scope = Scope::across;
  double ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n_refs = 0;
  /// References of this scope left out for lack of a baseline candidate.
  std::size_t dropped = 0;
  std::size_t baseline_k = 0;
  std::size_t bootstrap_b = 0;
  std::uint64_t seed = 0;

  double half_width() const { return (ci_high - ci_low) / 2.0; }
};

struct SampleSet {
  std::vector<PairedSample> samples;  // ascending by pair
  std::vector<CrossRef> excluded;
};

/// Similarities for each reference and its baselines in one corpus's
/// embedding space.
SampleSet build_samples(std::span<const CrossRef> refs, const Corpus& corpus, const EmbeddingStore& store,
                        std::size_t k, std::uint64_t seed);

/// Ratio and bootstrap interval per non-empty scope, in scope order.
std::vector<RatioResult> compute_ratio_set(std::span<const CrossRef> refs, const Corpus& corpus,
                                           const EmbeddingStore& store, const RatioOptions& options);

struct ShiftRecord {
  CrossRef ref;
  double sim_source = 0.0;
  double sim_target = 0.0;
  double delta = 0.0;  // sim_target - sim_source
};

/// One record per reference, by |delta| descending; ties keep pair order.
std::vector<ShiftRecord> shift_table(std::span<const CrossRef> refs, const EmbeddingStore& store,
                                     const std::string& source_corpus, const std::string& target_corpus);

}  // namespace intertext
