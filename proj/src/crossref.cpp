// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#include "intertext/crossref.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>

#include "intertext/error.hpp"
#include "text_util.hpp"

namespace intertext {

std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::within_jewish: return "within_jewish";
    case Scope::within_christian: return "within_christian";
    case Scope::across: return "across";
  }
  return "across";
}

Scope parse_scope(std::string_view s) {
  for (auto scope : kAllScopes) {
    if (to_string(scope) == s) return scope;
  }
  throw ParseError(fmt::format("unknown scope '{}'", s), 0);
}

BookAliases::BookAliases(std::unordered_map<std::string, std::string> table) : table_(std::move(table)) {
  for (const auto& [alias, code] : table_) {
    if (!is_valid_book_code(code)) throw ConfigError(fmt::format("book alias '{}' maps to invalid code '{}'", alias, code));
  }
}

BookAliases BookAliases::standard() {
  static const char* const kOpenBible[] = {
      "Gen",  "Exod", "Lev",  "Num",  "Deut",  "Josh",  "Judg", "Ruth", "1Sam", "2Sam", "1Kgs",
      "2Kgs", "1Chr", "2Chr", "Ezra", "Neh",   "Esth",  "Job",  "Ps",   "Prov", "Eccl", "Song",
      "Isa",  "Jer",  "Lam",  "Ezek", "Dan",   "Hos",   "Joel", "Amos", "Obad", "Jonah", "Mic",
      "Nah",  "Hab",  "Zeph", "Hag",  "Zech",  "Mal",   "Matt", "Mark", "Luke", "John", "Acts",
      "Rom",  "1Cor", "2Cor", "Gal",  "Eph",   "Phil",  "Col",  "1Thess", "2Thess", "1Tim", "2Tim",
      "Titus", "Phlm", "Heb", "Jas",  "1Pet",  "2Pet",  "1John", "2John", "3John", "Jude", "Rev"};
  const auto& codes = canonical_books();
  std::unordered_map<std::string, std::string> table;
  for (std::size_t i = 0; i < codes.size(); ++i) table.emplace(kOpenBible[i], codes[i]);
  return BookAliases(std::move(table));
}

BookAliases BookAliases::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open book alias table '{}'", path));
  auto table = standard().table_;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cols = detail::split(line, '\t');
    if (cols.size() != 2) throw ParseError("expected alias<TAB>code", lineno);
    table[std::string(cols[0])] = detail::to_upper(cols[1]);
  }
  return BookAliases(std::move(table));
}

std::optional<std::string> BookAliases::resolve(std::string_view token) const {
  if (auto it = table_.find(std::string(token)); it != table_.end()) return it->second;
  auto upper = detail::to_upper(token);
  if (is_valid_book_code(upper)) return upper;
  return std::nullopt;
}

namespace {

VerseRef parse_dataset_verse(std::string_view token, const BookAliases& aliases, std::size_t lineno) {
  auto parts = detail::split(token, '.');
  if (parts.size() != 3) throw ParseError(fmt::format("malformed verse token '{}'", token), lineno);
  auto book = aliases.resolve(parts[0]);
  if (!book) throw ParseError(fmt::format("unknown book '{}' in '{}'", parts[0], token), lineno);
  auto ch = detail::parse_uint(parts[1]);
  auto vs = detail::parse_uint(parts[2]);
  if (!ch || !vs) throw ParseError(fmt::format("malformed verse token '{}'", token), lineno);
  return VerseRef{*book, *ch, *vs};
}

/// Returns true when the token is a range (after validating both ends).
bool parse_endpoint(std::string_view token, const BookAliases& aliases, std::size_t lineno, VerseRef& out) {
  auto dash = token.find('-');
  if (dash == std::string_view::npos) {
    out = parse_dataset_verse(token, aliases, lineno);
    return false;
  }
  parse_dataset_verse(token.substr(0, dash), aliases, lineno);
  parse_dataset_verse(token.substr(dash + 1), aliases, lineno);
  return true;
}

}  // namespace

CrossRefParse parse_crossrefs(std::istream& in, const BookAliases& aliases) {
  CrossRefParse out;
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty() || line[0] == '#') continue;
    if (!seen_data && line.rfind("From Verse", 0) == 0) {
      seen_data = true;
      continue;
    }
    seen_data = true;
    auto cols = detail::split(line, '\t');
    if (cols.size() != 3) throw ParseError(fmt::format("expected 3 columns, found {}", cols.size()), lineno);
    auto votes = detail::parse_int(detail::trim(cols[2]));
    if (!votes) throw ParseError(fmt::format("malformed vote count '{}'", cols[2]), lineno);
    VerseRef from, to;
    bool from_range = parse_endpoint(detail::trim(cols[0]), aliases, lineno, from);
    bool to_range = parse_endpoint(detail::trim(cols[1]), aliases, lineno, to);
    if (from_range || to_range) {
      ++out.skipped_ranges;
      continue;
    }
    if (from == to) {
      ++out.self_links;
      continue;
    }
    out.vote_mass += *votes;
    out.refs.push_back({std::move(from), std::move(to), *votes});
  }
  return out;
}

VersePair VersePair::of(VerseRef a, VerseRef b) {
  if (b < a) std::swap(a, b);
  return VersePair{std::move(a), std::move(b)};
}

std::string VersePair::key() const { return first.str() + "|" + second.str(); }

FoldResult fold_bidirectional(std::span<const RawReference> raw) {
  std::map<VersePair, long long> sums;
  std::set<std::pair<VerseRef, VerseRef>> directions;
  FoldResult out;
  for (const auto& r : raw) {
    if (!directions.emplace(r.from, r.to).second) ++out.merged_duplicates;
    sums[VersePair::of(r.from, r.to)] += r.votes;
  }
  out.pairs.reserve(sums.size());
  for (auto& [pair, votes] : sums) out.pairs.push_back({pair, votes});
  return out;
}

Scope scope_of(const VersePair& pair, const TestamentSpec& spec) {
  auto a = spec.testament_of(pair.first.book);
  if (!a) throw ConfigError(fmt::format("book '{}' is not in the testament spec", pair.first.book));
  auto b = spec.testament_of(pair.second.book);
  if (!b) throw ConfigError(fmt::format("book '{}' is not in the testament spec", pair.second.book));
  if (*a != *b) return Scope::across;
  return *a == Testament::jewish ? Scope::within_jewish : Scope::within_christian;
}

FilterResult filter_refs(std::span<const FoldedPair> pairs, long long threshold, const TestamentSpec& spec,
                         std::span<const Corpus* const> corpora) {
  if (threshold < 0) throw ConfigError("vote threshold must be >= 0");
  if (corpora.empty()) throw ConfigError("reference filtering needs at least one corpus");
  FilterResult out;
  for (const auto& fp : pairs) {
    if (fp.votes < threshold) {
      ++out.below_threshold;
      continue;
    }
    if (fp.pair.first.book == fp.pair.second.book) {
      ++out.same_book;
      continue;
    }
    bool resolvable = std::all_of(corpora.begin(), corpora.end(), [&](const Corpus* c) {
      return c->resolve(fp.pair.first) && c->resolve(fp.pair.second);
    });
    if (!resolvable) {
      ++out.unresolvable;
      continue;
    }
    out.refs.push_back({fp.pair, fp.votes, scope_of(fp.pair, spec)});
  }
  return out;
}

std::vector<CrossRef>& Partition::operator[](Scope s) {
  switch (s) {
    case Scope::within_jewish: return within_jewish;
    case Scope::within_christian: return within_christian;
    case Scope::across: return across;
  }
  return across;
}

const std::vector<CrossRef>& Partition::operator[](Scope s) const {
  return const_cast<Partition&>(*this)[s];
}

Partition partition(std::span<const CrossRef> refs) {
  Partition out;
  for (const auto& r : refs) out[r.scope].push_back(r);
  return out;
}

void write_refs(std::span<const CrossRef> refs, std::ostream& out) {
  out << "first\tsecond\tvotes\tscope\n";
  for (const auto& r : refs) {
    out << r.pair.first.str() << '\t' << r.pair.second.str() << '\t' << r.votes << '\t' << to_string(r.scope)
        << '\n';
  }
}

std::vector<CrossRef> read_refs(std::istream& in) {
  std::vector<CrossRef> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.rfind("first\t", 0) == 0) continue;
    auto cols = detail::split(line, '\t');
    if (cols.size() != 4) throw ParseError("expected first, second, votes and scope columns", lineno);
    auto votes = detail::parse_int(cols[2]);
    if (!votes) throw ParseError(fmt::format("malformed vote count '{}'", cols[2]), lineno);
    try {
      out.push_back({VersePair::of(VerseRef::parse(cols[0]), VerseRef::parse(cols[1])), *votes, parse_scope(cols[3])});
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

}  // namespace intertext
