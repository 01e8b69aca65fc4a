// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "intertext/corpus.hpp"
#include "intertext/error.hpp"
#include "intertext/rng.hpp"
#include "intertext/verse_ref.hpp"

using namespace intertext;
using intertext::testing::corpus_from_tsv;

TEST_CASE("verse refs parse, print and order canonically") {
  auto r = VerseRef::parse("JHN.3.16");
  CHECK(r.book == "JHN");
  CHECK(r.chapter == 3);
  CHECK(r.verse == 16);
  CHECK(r.str() == "JHN.3.16");

  CHECK(VerseRef::parse("GEN.50.26") < VerseRef::parse("EXO.1.1"));
  CHECK(VerseRef::parse("MAL.4.6") < VerseRef::parse("MAT.1.1"));
  CHECK(VerseRef::parse("GEN.2.1") > VerseRef::parse("GEN.1.31"));
  CHECK(VerseRef::parse("REV.22.21") < VerseRef::parse("TOB.1.1"));  // outside the canon sorts last
  CHECK(VerseRef::parse("SIR.1.1") < VerseRef::parse("TOB.1.1"));

  CHECK_THROWS_AS(VerseRef::parse("GEN.0.1"), ParseError);
  CHECK_THROWS_AS(VerseRef::parse("GEN.1"), ParseError);
  CHECK_THROWS_AS(VerseRef::parse("gen.1.1"), ParseError);
  CHECK_THROWS_AS(VerseRef::make("G", 1, 1), ParseError);
}

TEST_CASE("testament spec") {
  auto std_spec = TestamentSpec::standard();
  CHECK(std_spec.jewish_books().size() == 39);
  CHECK(std_spec.christian_books().size() == 27);
  CHECK(std_spec.testament_of("ISA") == Testament::jewish);
  CHECK(std_spec.testament_of("HEB") == Testament::christian);
  CHECK_FALSE(std_spec.testament_of("TOB").has_value());

  std::istringstream dup(R"({"jewish": ["GEN"], "christian": ["GEN"]})");
  CHECK_THROWS_AS(TestamentSpec::from_json(dup), ConfigError);
  std::istringstream missing(R"({"jewish": ["GEN"]})");
  CHECK_THROWS_AS(TestamentSpec::from_json(missing), ConfigError);
}

TEST_CASE("corpus parsing") {
  auto c = corpus_from_tsv("# comment\n\ngen\t1\t1\tIn the beginning\nGEN\t1\t2\tAnd the earth\n");
  CHECK(c.size() == 2);
  CHECK(c.resolve(VerseRef::parse("GEN.1.1")) == "In the beginning");
  CHECK_FALSE(c.resolve(VerseRef::parse("GEN.1.3")).has_value());

  SUBCASE("duplicate names the verse") {
    try {
      corpus_from_tsv("GEN\t1\t1\ta\nGEN\t1\t1\tb\n");
      FAIL("expected a duplicate error");
    } catch (const DuplicateKeyError& e) {
      CHECK(std::string(e.what()).find("GEN.1.1") != std::string::npos);
    }
  }
  SUBCASE("malformed rows carry their line") {
    try {
      corpus_from_tsv("GEN\t1\t1\ta\nGEN\t1\tx\tb\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(corpus_from_tsv("GEN\t1\t1\n"), ParseError);
    CHECK_THROWS_AS(corpus_from_tsv("GEN\t1\t1\ta\tb\n"), ParseError);
    CHECK_THROWS_AS(corpus_from_tsv("GEN\t1\t1\t  \n"), ParseError);
    CHECK_THROWS_AS(corpus_from_tsv("GEN\t1\t1\ta\r\n"), ParseError);
    CHECK_THROWS_AS(corpus_from_tsv("GEN\t0\t1\ta\n"), ParseError);
  }
}

TEST_CASE("corpus round-trips through TSV") {
  auto c = corpus_from_tsv("MAT\t1\t2\tb\nGEN\t1\t1\ta\nGEN\t2\t1\tc\n");
  std::ostringstream out;
  write_corpus(c, out);
  CHECK(out.str() == "GEN\t1\t1\ta\nGEN\t2\t1\tc\nMAT\t1\t2\tb\n");
  CHECK(corpus_from_tsv(out.str()) == c);
}

TEST_CASE("chapter verses") {
  auto c = corpus_from_tsv("GEN\t1\t1\ta\nGEN\t1\t3\tb\nGEN\t2\t1\tc\nEXO\t1\t1\td\n");
  auto v = c.chapter_verses("GEN", 1);
  REQUIRE(v.size() == 2);
  CHECK(v[0].verse == 1);
  CHECK(v[1].verse == 3);
  CHECK(c.chapter_verses("LEV", 1).empty());
}

TEST_CASE("versification") {
  auto c = corpus_from_tsv("GEN\t31\t55\tlast\nGEN\t32\t2\tsecond\n", "lxx");
  std::istringstream in("lxx\tGEN.31.55\tGEN.32.1\nlxx\tGEN.40.1\tGEN.40.2\n");
  auto map = parse_versification(in);
  CHECK(map.corpus_id() == "lxx");
  auto res = apply_versification(c, map);
  CHECK(res.corpus.resolve(VerseRef::parse("GEN.32.1")) == "last");
  CHECK_FALSE(res.corpus.resolve(VerseRef::parse("GEN.31.55")).has_value());
  REQUIRE(res.missing_sources.size() == 1);
  CHECK(res.missing_sources[0].str() == "GEN.40.1");

  SUBCASE("identity for an empty map") { CHECK(apply_versification(c, VersificationMap{}).corpus == c); }
  SUBCASE("inverse restores") {
    CHECK(apply_versification(res.corpus, map.inverse()).corpus.verses() == c.verses());
  }
  SUBCASE("collision names the target") {
    VersificationMap bad("lxx", {{VerseRef::parse("GEN.31.55"), VerseRef::parse("GEN.32.2")}});
    try {
      apply_versification(c, bad);
      FAIL("expected a collision");
    } catch (const CollisionError& e) {
      CHECK(std::string(e.what()).find("GEN.32.2") != std::string::npos);
    }
  }
  SUBCASE("non-injective maps are rejected") {
    CHECK_THROWS_AS(VersificationMap("x", {{VerseRef::parse("GEN.1.1"), VerseRef::parse("GEN.1.3")},
                                           {VerseRef::parse("GEN.1.2"), VerseRef::parse("GEN.1.3")}}),
                    ValidationError);
  }
  SUBCASE("mixed ids") {
    std::istringstream mixed("a\tGEN.1.1\tGEN.1.2\nb\tGEN.1.3\tGEN.1.4\n");
    CHECK_THROWS_AS(parse_versification(mixed), ParseError);
  }
}

TEST_CASE("derived random streams") {
  auto a = RandomStream::derive(42, "baseline", 7);
  auto b = RandomStream::derive(42, "baseline", 7);
  auto c = RandomStream::derive(42, "baseline", 8);
  auto d = RandomStream::derive(42, "bootstrap", 7);
  const auto first = a.next();
  CHECK(first == b.next());
  CHECK(first != c.next());
  CHECK(first != d.next());

  // below(n) is roughly uniform.
  auto s = RandomStream::derive(1, "uniform", 0);
  std::array<int, 6> hist{};
  for (int i = 0; i < 60000; ++i) ++hist[s.below(6)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 400);
  for (int i = 0; i < 1000; ++i) {
    double u = s.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
