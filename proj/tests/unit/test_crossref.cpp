// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "intertext/crossref.hpp"
#include "intertext/error.hpp"

using namespace intertext;
using intertext::testing::corpus_from_tsv;

namespace {

CrossRefParse parse(const std::string& text) {
  std::istringstream in(text);
  return parse_crossrefs(in);
}

VerseRef v(const char* s) { return VerseRef::parse(s); }

}  // namespace

TEST_CASE("aliases") {
  auto a = BookAliases::standard();
  CHECK(a.resolve("Gen") == "GEN");
  CHECK(a.resolve("Matt") == "MAT");
  CHECK(a.resolve("1Cor") == "1CO");
  CHECK(a.resolve("Song") == "SNG");
  CHECK(a.resolve("heb") == "HEB");  // bare code, any case
  CHECK_FALSE(a.resolve("Nonsense!").has_value());
}

TEST_CASE("dataset parsing") {
  auto p = parse(
      "From Verse\tTo Verse\tVotes\t#www.openbible.info CC-BY 2026-01-01\n"
      "Gen.1.1\tJohn.1.1\t120\n"
      "Gen.1.1\tPs.33.6-Ps.33.9\t40\n"
      "Isa.43.25\tHeb.8.12\t-3\n"
      "Gen.1.1\tGen.1.1\t9\n");
  REQUIRE(p.refs.size() == 2);
  CHECK(p.refs[0].from == v("GEN.1.1"));
  CHECK(p.refs[0].to == v("JHN.1.1"));
  CHECK(p.refs[1].votes == -3);
  CHECK(p.skipped_ranges == 1);
  CHECK(p.self_links == 1);
  CHECK(p.vote_mass == 117);

  CHECK_THROWS_AS(parse("Gen.1.1\tJohn.1.1\n"), ParseError);
  CHECK_THROWS_AS(parse("Gen.1.1\tJohn.1.1\tmany\n"), ParseError);
  CHECK_THROWS_AS(parse("Gen.1.1\tBlahblah.1.1\t4\n"), ParseError);
  CHECK_THROWS_AS(parse("Gen.1.1\tPs.33.6-Ps.x.9\t4\n"), ParseError);
  try {
    parse("Gen.1.1\tJohn.1.1\t3\nGen.1\tJohn.1.1\t3\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("bidirectional folding sums both directions") {
  auto p = parse(
      "Gen.1.1\tJohn.1.1\t30\n"
      "John.1.1\tGen.1.1\t25\n"
      "Gen.1.1\tJohn.1.1\t5\n"
      "Exod.3.14\tJohn.8.58\t70\n");
  auto f = fold_bidirectional(p.refs);
  REQUIRE(f.pairs.size() == 2);
  CHECK(f.pairs[0].pair == VersePair::of(v("GEN.1.1"), v("JHN.1.1")));
  CHECK(f.pairs[0].votes == 60);
  CHECK(f.pairs[1].votes == 70);
  CHECK(f.merged_duplicates == 1);

  // Folding preserves total vote mass.
  long long total = 0;
  for (const auto& fp : f.pairs) total += fp.votes;
  CHECK(total == p.vote_mass);
}

TEST_CASE("pairs are unordered") {
  auto a = VersePair::of(v("JHN.1.1"), v("GEN.1.1"));
  CHECK(a.first == v("GEN.1.1"));
  CHECK(a == VersePair::of(v("GEN.1.1"), v("JHN.1.1")));
  CHECK(a.key() == "GEN.1.1|JHN.1.1");
}

TEST_CASE("filtering and labelling") {
  auto c1 = corpus_from_tsv("GEN\t1\t1\ta\nGEN\t1\t2\tb\nEXO\t1\t1\tc\nJHN\t1\t1\td\nMAT\t1\t1\te\nMRK\t1\t1\tf\n", "one");
  auto c2 = corpus_from_tsv("GEN\t1\t1\ta\nGEN\t1\t2\tb\nEXO\t1\t1\tc\nJHN\t1\t1\td\nMAT\t1\t1\te\n", "two");
  std::vector<FoldedPair> pairs = {
      {VersePair::of(v("GEN.1.1"), v("EXO.1.1")), 50},   // kept, within_jewish
      {VersePair::of(v("GEN.1.1"), v("JHN.1.1")), 80},   // kept, across
      {VersePair::of(v("MAT.1.1"), v("JHN.1.1")), 49},   // below threshold
      {VersePair::of(v("GEN.1.1"), v("GEN.1.2")), 99},   // same book
      {VersePair::of(v("MAT.1.1"), v("MRK.1.1")), 99},   // missing in "two"
      {VersePair::of(v("JHN.1.1"), v("MAT.1.1")), 51}};  // kept, within_christian
  const Corpus* corpora[] = {&c1, &c2};
  auto r = filter_refs(pairs, 50, TestamentSpec::standard(), corpora);
  REQUIRE(r.refs.size() == 3);
  CHECK(r.refs[0].scope == Scope::within_jewish);
  CHECK(r.refs[1].scope == Scope::across);
  CHECK(r.refs[2].scope == Scope::within_christian);
  CHECK(r.below_threshold == 1);
  CHECK(r.same_book == 1);
  CHECK(r.unresolvable == 1);

  auto part = partition(r.refs);
  CHECK(part[Scope::within_jewish].size() == 1);
  CHECK(part[Scope::within_christian].size() == 1);
  CHECK(part[Scope::across].size() == 1);

  SUBCASE("raising the threshold never adds references") {
    for (long long t = 0; t <= 100; t += 10) {
      auto lo = filter_refs(pairs, t, TestamentSpec::standard(), corpora);
      auto hi = filter_refs(pairs, t + 10, TestamentSpec::standard(), corpora);
      CHECK(hi.refs.size() <= lo.refs.size());
    }
  }
  SUBCASE("books outside the spec") {
    TestamentSpec narrow({"GEN"}, {"JHN"});
    CHECK_THROWS_AS(filter_refs(pairs, 50, narrow, corpora), ConfigError);
  }
}

TEST_CASE("refs file round-trip") {
  std::vector<CrossRef> refs = {{VersePair::of(v("GEN.1.1"), v("JHN.1.1")), 80, Scope::across},
                                {VersePair::of(v("GEN.1.1"), v("EXO.3.14")), 51, Scope::within_jewish}};
  std::stringstream io;
  write_refs(refs, io);
  CHECK(read_refs(io) == refs);

  std::istringstream bad("first\tsecond\tvotes\tscope\nGEN.1.1\tJHN.1.1\t80\tsideways\n");
  CHECK_THROWS_AS(read_refs(bad), ParseError);
}
