// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

// Fixtures and independent oracles shared by the unit and acceptance suites.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "intertext/corpus.hpp"
#include "intertext/crossref.hpp"
#include "intertext/embed_store.hpp"
#include "intertext/metric.hpp"

namespace intertext::testing {

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

void write_file(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

/// Corpus from TSV text.
Corpus corpus_from_tsv(const std::string& tsv, const std::string& id = "test",
                       Provenance provenance = Provenance::original);

/// Float vector with `first` at index 0 and a filler at `axis`, chosen so
/// that normalize() returns it unchanged bit-for-bit.
std::vector<float> exact_unit(float first, std::size_t dim, std::size_t axis);

/// Float vector `b` (same dim as `a`, which must be a normalize() fixed
/// point using only indices 0 and 1) such that the exact dot product with
/// `a` lies within `tol` of `target` and normalize(b) == b.
std::vector<float> partner_with_cosine(const std::vector<float>& a, double target, double tol);

/// Exact dot product of two float vectors, in long double.
long double exact_dot(std::span<const float> a, std::span<const float> b);

struct Atom {
  long double value;
  long double probability;
};

/// Exact distribution of the paired-bootstrap ratio by enumerating all n^n
/// ordered draws. Atoms ascending; probabilities sum to 1.
std::vector<Atom> enumerate_bootstrap_distribution(std::span<const PairedSample> samples);

/// sup |F_empirical - F_exact| over the atoms of the exact distribution.
double cdf_distance(std::span<const double> replicates, std::span<const Atom> exact);

/// Synthetic store where every reference pair has similarity 0.9f and
/// every baseline pair exactly half of that, in all three scopes.
struct ConstantRatioFixture {
  std::vector<Corpus> corpora;
  std::vector<CrossRef> refs;
  EmbeddingStore store{3};
  double ref_sim = 0.0;
  double baseline_sim = 0.0;
};
ConstantRatioFixture make_constant_ratio_fixture(const std::vector<std::string>& corpus_ids = {"fixture"});

/// Writes the constant-ratio fixture as files (corpus TSVs, cross-reference
/// dataset, testament spec, ITXE store) plus `analysis.conf`; returns the
/// config path.
std::string write_constant_ratio_files(const TempDir& dir, const std::vector<std::string>& corpus_ids,
                                       const std::string& out_dir = "out");

/// Two corpora over the same verses; the pair ISA.43.25/HEB.8.12 moves from
/// 0.332 to 0.656, the other pairs move by about 0.1 or less.
std::string write_shift_files(const TempDir& dir);

/// 200 verses over GEN, EXO, MAT, MRK (5 chapters of 10 each), i.i.d.
/// unit vectors of dim 64 with a shared mean direction, and 50 distinct
/// across-testament references.
struct NullFixture {
  Corpus corpus;
  std::vector<CrossRef> refs;
  EmbeddingStore store{64};
};
NullFixture make_null_fixture(std::uint64_t seed);

/// A synthetic corpus with chapters of varying size (1 to 6 verses) in
/// GEN, EXO, MAT and references between them.
struct BaselineSweepFixture {
  Corpus corpus;
  std::vector<CrossRef> refs;
};
BaselineSweepFixture make_baseline_sweep_fixture();

}  // namespace intertext::testing
