// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace fs = std::filesystem;

namespace intertext::testing {

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "intertext-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Corpus corpus_from_tsv(const std::string& tsv, const std::string& id, Provenance provenance) {
  std::istringstream in(tsv);
  return parse_corpus(in, id, "und", provenance);
}

namespace {

bool is_fixed_point(const std::vector<float>& v) {
  auto n = normalize(v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::bit_cast<std::uint32_t>(n[i]) != std::bit_cast<std::uint32_t>(v[i])) return false;
  }
  return true;
}

/// Tries floats near `guess` for v[axis] until v is a normalize() fixed point.
bool settle(std::vector<float>& v, std::size_t axis, float guess) {
  float lo = guess, hi = guess;
  for (int step = 0; step < 64; ++step) {
    for (float cand : {lo, hi}) {
      v[axis] = cand;
      if (is_fixed_point(v)) return true;
    }
    lo = std::nextafter(lo, -1.0f);
    hi = std::nextafter(hi, 2.0f);
  }
  return false;
}

}  // namespace

std::vector<float> exact_unit(float first, std::size_t dim, std::size_t axis) {
  std::vector<float> v(dim, 0.0f);
  v[0] = first;
  if (first == 1.0f) return v;
  auto rest = static_cast<float>(std::sqrt(1.0L - static_cast<long double>(first) * first));
  if (!settle(v, axis, rest)) throw std::runtime_error("no fixed-point unit vector");
  return v;
}

long double exact_dot(std::span<const float> a, std::span<const float> b) {
  long double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += static_cast<long double>(a[i]) * b[i];
  return d;
}

std::vector<float> partner_with_cosine(const std::vector<float>& a, double target, double tol) {
  const long double p = a[0], q = a[1];
  const auto r0 = static_cast<float>(target * a[0]);
  const auto s0 = static_cast<float>(target * a[1]);
  auto neighbours = [](float x) {
    std::vector<float> out{x};
    float lo = x, hi = x;
    for (int i = 0; i < 400; ++i) {
      lo = std::nextafter(lo, -2.0f);
      hi = std::nextafter(hi, 2.0f);
      out.push_back(lo);
      out.push_back(hi);
    }
    return out;
  };
  const auto rs = neighbours(r0);
  const auto ss = neighbours(s0);
  std::vector<float> b(a.size(), 0.0f);
  for (float r : rs) {
    for (float s : ss) {
      long double d = p * r + q * s;
      if (std::fabs(static_cast<double>(d - target)) >= tol) continue;
      b[0] = r;
      b[1] = s;
      long double rest = 1.0L - static_cast<long double>(r) * r - static_cast<long double>(s) * s;
      if (rest <= 0) continue;
      if (settle(b, 2, static_cast<float>(std::sqrt(rest)))) return b;
    }
  }
  throw std::runtime_error(fmt::format("no float partner with cosine {}", target));
}

std::vector<Atom> enumerate_bootstrap_distribution(std::span<const PairedSample> samples) {
  const std::size_t n = samples.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= n;
  std::map<long double, std::size_t> counts;
  std::vector<std::size_t> draw(n, 0);
  for (std::size_t outcome = 0; outcome < total; ++outcome) {
    std::size_t code = outcome;
    for (std::size_t j = 0; j < n; ++j) {
      draw[j] = code % n;
      code /= n;
    }
    long double ref_sum = 0, base_sum = 0, base_count = 0;
    for (auto i : draw) {
      ref_sum += samples[i].ref_sim;
      for (double b : samples[i].baseline_sims) base_sum += b;
      base_count += samples[i].baseline_sims.size();
    }
    // Round to 1e-12 so equal multisets in different orders share an atom.
    long double ratio = (ref_sum / n) / (base_sum / base_count);
    ratio = std::round(ratio * 1e12L) / 1e12L;
    ++counts[ratio];
  }
  std::vector<Atom> out;
  for (auto [value, count] : counts) out.push_back({value, static_cast<long double>(count) / total});
  return out;
}

double cdf_distance(std::span<const double> replicates, std::span<const Atom> exact) {
  std::vector<double> sorted(replicates.begin(), replicates.end());
  std::sort(sorted.begin(), sorted.end());
  double worst = 0.0;
  long double cumulative = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    cumulative += exact[i].probability;
    // Evaluate just above the atom, below the next one.
    double x = static_cast<double>(exact[i].value) + 1e-9 * std::max(1.0, std::fabs(static_cast<double>(exact[i].value)));
    if (i + 1 < exact.size() && x >= static_cast<double>(exact[i + 1].value)) {
      throw std::runtime_error("atoms too close for the CDF comparison");
    }
    auto below = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    double empirical = static_cast<double>(below) / sorted.size();
    worst = std::max(worst, std::fabs(empirical - static_cast<double>(cumulative)));
    // Just below the atom.
    double y = static_cast<double>(exact[i].value) - 1e-9 * std::max(1.0, std::fabs(static_cast<double>(exact[i].value)));
    auto below_y = std::upper_bound(sorted.begin(), sorted.end(), y) - sorted.begin();
    double emp_y = static_cast<double>(below_y) / sorted.size();
    worst = std::max(worst, std::fabs(emp_y - static_cast<double>(cumulative - exact[i].probability)));
  }
  return worst;
}

namespace {

struct ChapterPlan {
  std::string book;
  std::uint32_t chapter;
  bool endpoint_a;  // holds the "a" side of a reference
};

std::string verse_text(const VerseRef& r) { return fmt::format("text of {} {}:{}", r.book, r.chapter, r.verse); }

constexpr std::uint32_t kVersesPerChapter = 4;

}  // namespace

ConstantRatioFixture make_constant_ratio_fixture(const std::vector<std::string>& corpus_ids) {
  ConstantRatioFixture f;
  const auto a = std::vector<float>{1.0f, 0.0f, 0.0f};
  const auto b = exact_unit(0.9f, 3, 1);
  const auto filler_a = exact_unit(0.5f, 3, 2);   // 0.5 * b[0] against b
  const auto filler_b = exact_unit(0.45f, 3, 2);  // 0.45f against a
  f.ref_sim = static_cast<double>(exact_dot(a, b));
  f.baseline_sim = static_cast<double>(exact_dot(filler_a, b));

  struct Link {
    const char* a_book;
    const char* b_book;
    std::uint32_t first_chapter;
    Scope scope;
  };
  const Link links[] = {{"GEN", "EXO", 1, Scope::within_jewish},
                        {"MAT", "MRK", 1, Scope::within_christian},
                        {"GEN", "MAT", 4, Scope::across}};

  Corpus::VerseMap verses;
  std::map<VerseRef, const std::vector<float>*> vectors;
  for (const auto& link : links) {
    for (std::uint32_t ch = link.first_chapter; ch < link.first_chapter + 3; ++ch) {
      for (std::uint32_t vs = 1; vs <= kVersesPerChapter; ++vs) {
        VerseRef ra{link.a_book, ch, vs}, rb{link.b_book, ch, vs};
        verses.emplace(ra, verse_text(ra));
        verses.emplace(rb, verse_text(rb));
        vectors[ra] = vs == 1 ? &a : &filler_a;
        vectors[rb] = vs == 1 ? &b : &filler_b;
      }
      f.refs.push_back({VersePair::of({link.a_book, ch, 1}, {link.b_book, ch, 1}), 60, link.scope});
    }
  }
  for (const auto& id : corpus_ids) {
    f.corpora.emplace_back(id, "grc", Provenance::original, verses);
    for (const auto& [ref, v] : vectors) f.store.insert(id, ref, *v);
  }
  return f;
}

namespace {

std::string dataset_token(const VerseRef& r) {
  static const std::map<std::string, std::string> names = {
      {"GEN", "Gen"}, {"EXO", "Exod"}, {"MAT", "Matt"}, {"MRK", "Mark"}, {"ISA", "Isa"},
      {"HEB", "Heb"}, {"JHN", "John"}};
  return fmt::format("{}.{}.{}", names.at(r.book), r.chapter, r.verse);
}

std::string crossref_tsv(const std::vector<CrossRef>& refs) {
  std::string out = "From Verse\tTo Verse\tVotes\t#fixture\n";
  for (const auto& r : refs) {
    out += fmt::format("{}\t{}\t{}\n", dataset_token(r.pair.first), dataset_token(r.pair.second), r.votes);
  }
  return out;
}

std::string corpus_tsv(const Corpus& c) {
  std::ostringstream out;
  write_corpus(c, out);
  return out.str();
}

}  // namespace

std::string write_constant_ratio_files(const TempDir& dir, const std::vector<std::string>& corpus_ids,
                                       const std::string& out_dir) {
  auto f = make_constant_ratio_fixture(corpus_ids);
  std::string conf;
  for (const auto& c : f.corpora) {
    write_file(dir.file(c.id() + ".tsv"), corpus_tsv(c));
    conf += fmt::format("corpus.{0}.path = {0}.tsv\ncorpus.{0}.language = grc\ncorpus.{0}.provenance = original\n",
                        c.id());
  }
  write_file(dir.file("crossrefs.tsv"), crossref_tsv(f.refs));
  write_file(dir.file("testaments.json"), R"({"jewish": ["GEN", "EXO"], "christian": ["MAT", "MRK"]})");
  save_store_file(f.store, dir.file("embeddings.itxe"));
  conf +=
      "testaments = testaments.json\n"
      "crossrefs = crossrefs.tsv\n"
      "embeddings = embeddings.itxe\n"
      "threshold = 50\n"
      "seed = 42\n"
      "out = " + out_dir + "\n";
  write_file(dir.file("analysis.conf"), conf);
  return dir.file("analysis.conf");
}

std::string write_shift_files(const TempDir& dir) {
  const auto a = exact_unit(0.5773f, 3, 1);  // an irregular direction gives a finer grid of dot products
  struct Move {
    VerseRef first, second;
    double from, to;
  };
  const Move moves[] = {{{"ISA", 43, 25}, {"HEB", 8, 12}, 0.332, 0.656},
                        {{"GEN", 1, 1}, {"JHN", 1, 1}, 0.5, 0.6},
                        {{"EXO", 3, 14}, {"JHN", 8, 58}, 0.45, 0.40}};

  Corpus::VerseMap greek, english;
  EmbeddingStore store(3);
  std::string refs = "From Verse\tTo Verse\tVotes\n";
  for (const auto& m : moves) {
    greek.emplace(m.first, "greek " + m.first.str());
    greek.emplace(m.second, "greek " + m.second.str());
    english.emplace(m.first, "english " + m.first.str());
    english.emplace(m.second, "english " + m.second.str());
    store.insert("greek", m.first, a);
    store.insert("english", m.first, a);
    store.insert("greek", m.second, partner_with_cosine(a, m.from, 1e-10));
    store.insert("english", m.second, partner_with_cosine(a, m.to, 1e-10));
    refs += fmt::format("{}\t{}\t80\n", dataset_token(m.first), dataset_token(m.second));
  }
  write_file(dir.file("greek.tsv"), corpus_tsv(Corpus("greek", "grc", Provenance::original, greek)));
  write_file(dir.file("english.tsv"), corpus_tsv(Corpus("english", "en", Provenance::human, english)));
  write_file(dir.file("crossrefs.tsv"), refs);
  save_store_file(store, dir.file("embeddings.itxe"));
  write_file(dir.file("shift.conf"),
             "corpus.greek.path = greek.tsv\ncorpus.greek.language = grc\ncorpus.greek.provenance = original\n"
             "corpus.english.path = english.tsv\ncorpus.english.language = en\ncorpus.english.provenance = human\n"
             "crossrefs = crossrefs.tsv\nembeddings = embeddings.itxe\nout = out\n"
             "shift_source = greek\nshift_target = english\n");
  return dir.file("shift.conf");
}

NullFixture make_null_fixture(std::uint64_t seed) {
  NullFixture f;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const char* books[] = {"GEN", "EXO", "MAT", "MRK"};
  Corpus::VerseMap verses;
  std::vector<VerseRef> jewish, christian;
  for (int b = 0; b < 4; ++b) {
    for (std::uint32_t ch = 1; ch <= 5; ++ch) {
      for (std::uint32_t vs = 1; vs <= 10; ++vs) {
        VerseRef r{books[b], ch, vs};
        verses.emplace(r, verse_text(r));
        std::vector<float> v(64);
        for (auto& x : v) x = static_cast<float>(0.7 + noise(gen));
        f.store.insert("null", r, v);
        (b < 2 ? jewish : christian).push_back(r);
      }
    }
  }
  f.corpus = Corpus("null", "und", Provenance::original, std::move(verses));
  std::set<VersePair> seen;
  std::uniform_int_distribution<std::size_t> pick(0, jewish.size() - 1);
  while (f.refs.size() < 50) {
    auto pair = VersePair::of(jewish[pick(gen)], christian[pick(gen)]);
    if (seen.insert(pair).second) f.refs.push_back({pair, 100, Scope::across});
  }
  return f;
}

BaselineSweepFixture make_baseline_sweep_fixture() {
  BaselineSweepFixture f;
  Corpus::VerseMap verses;
  const char* books[] = {"GEN", "EXO", "MAT"};
  for (int b = 0; b < 3; ++b) {
    for (std::uint32_t ch = 1; ch <= 6; ++ch) {
      const std::uint32_t size = b == 1 ? 7 - ch : ch;  // 1..6 verses
      for (std::uint32_t vs = 1; vs <= size; ++vs) {
        VerseRef r{books[b], ch, vs};
        verses.emplace(r, verse_text(r));
      }
    }
  }
  f.corpus = Corpus("sweep", "und", Provenance::original, verses);
  std::vector<VerseRef> all;
  for (const auto& [r, t] : verses) all.push_back(r);
  for (std::size_t i = 0; i < all.size(); i += 3) {
    for (std::size_t j = i + 1; j < all.size(); j += 5) {
      f.refs.push_back({VersePair::of(all[i], all[j]), 60, Scope::across});
    }
  }
  return f;
}

}  // namespace intertext::testing
