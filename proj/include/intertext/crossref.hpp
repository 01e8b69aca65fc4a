// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "intertext/corpus.hpp"
#include "intertext/verse_ref.hpp"

namespace intertext {

enum class Scope { within_jewish, within_christian, across };

inline constexpr Scope kAllScopes[] = {Scope::within_jewish, Scope::within_christian, Scope::across};

std::string_view to_string(Scope s);
Scope parse_scope(std::string_view s);

/// Maps dataset book tokens (`Gen`, `1Kgs`, ...) onto canonical codes.
class BookAliases {
 public:
  BookAliases() = default;
  explicit BookAliases(std::unordered_map<std::string, std::string> table);

  /// OpenBible-style abbreviations for the 66-book canon.
  static BookAliases standard();
  /// Reads `alias<TAB>CODE` lines, layered over the standard table.
  static BookAliases load(const std::string& path);

  /// Alias lookup, then the upper-cased token itself if it is a valid code.
  std::optional<std::string> resolve(std::string_view token) const;

 private:
  std::unordered_map<std::string, std::string> table_;
};

struct RawReference {
  VerseRef from;
  VerseRef to;
  long long votes = 0;
};

struct CrossRefParse {
  std::vector<RawReference> refs;
  std::size_t skipped_ranges = 0;
  std::size_t self_links = 0;
  /// Sum of votes over rows that were kept.
  long long vote_mass = 0;
};

/// Reads `From<TAB>To<TAB>Votes` rows. Range endpoints (`Gen.2.1-Gen.2.3`)
/// are validated, then skipped and counted.
CrossRefParse parse_crossrefs(std::istream& in, const BookAliases& aliases = BookAliases::standard());

/// Unordered verse pair; `first` always orders before `second`.
struct VersePair {
  VerseRef first;
  VerseRef second;

  static VersePair of(VerseRef a, VerseRef b);
  std::string key() const;  // `first|second`

  friend bool operator==(const VersePair&, const VersePair&) = default;
  friend auto operator<=>(const VersePair&, const VersePair&) = default;
};

struct FoldedPair {
  VersePair pair;
  long long votes = 0;
};

struct FoldResult {
  std::vector<FoldedPair> pairs;  // ascending by pair
  /// Rows that repeated an already-seen (from, to) direction.
  std::size_t merged_duplicates = 0;
};

/// Sums votes over both directions of each verse pair.
FoldResult fold_bidirectional(std::span<const RawReference> raw);

struct CrossRef {
  VersePair pair;
  long long votes = 0;
  Scope scope = Scope::across;

  friend bool operator==(const CrossRef&, const CrossRef&) = default;
};

struct FilterResult {
  std::vector<CrossRef> refs;
  std::size_t below_threshold = 0;
  std::size_t same_book = 0;
  std::size_t unresolvable = 0;
};

/// Keeps pairs with votes >= threshold whose endpoints lie in different books
/// and resolve in every corpus, labelling each with its testament scope.
/// Throws ConfigError when a kept endpoint's book is missing from `spec`.
FilterResult filter_refs(std::span<const FoldedPair> pairs, long long threshold, const TestamentSpec& spec,
                         std::span<const Corpus* const> corpora);

Scope scope_of(const VersePair& pair, const TestamentSpec& spec);

struct Partition {
  std::vector<CrossRef> within_jewish;
  std::vector<CrossRef> within_christian;
  std::vector<CrossRef> across;

  std::vector<CrossRef>& operator[](Scope s);
  const std::vector<CrossRef>& operator[](Scope s) const;
};

Partition partition(std::span<const CrossRef> refs);

/// `first<TAB>second<TAB>votes<TAB>scope` with a header row.
void write_refs(std::span<const CrossRef> refs, std::ostream& out);
std::vector<CrossRef> read_refs(std::istream& in);

}  // namespace intertext
