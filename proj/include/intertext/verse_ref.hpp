// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace intertext {

/// Canonical verse address. Always in the canonical (English) versification
/// once a corpus has been ingested.
///
/// Ordering is by book rank in the standard 66-book canon, then by chapter and
/// verse. Books outside the canon sort after it, by code.
struct VerseRef {
  std::string book;
  std::uint32_t chapter = 0;
  std::uint32_t verse = 0;

  /// Validating constructor; throws ParseError on a bad book code or a
  /// zero chapter/verse.
  static VerseRef make(std::string_view book, std::uint32_t chapter, std::uint32_t verse);

  /// Parses `BOOK.ch.vs`.
  static VerseRef parse(std::string_view token);

  std::string str() const;  // `BOOK.ch.vs`

  friend bool operator==(const VerseRef&, const VerseRef&) = default;
  friend std::strong_ordering operator<=>(const VerseRef& a, const VerseRef& b);
};

bool is_valid_book_code(std::string_view code);

/// Position of `code` in the standard canon (GEN = 0 ... REV = 65), or
/// nullopt for books outside it.
std::optional<std::size_t> canonical_book_rank(std::string_view code);

/// The standard canon's book codes, in order.
const std::vector<std::string>& canonical_books();

struct VerseRefHash {
  std::size_t operator()(const VerseRef& r) const noexcept;
};

enum class Testament { jewish, christian };

/// Which books belong to which testament.
class TestamentSpec {
 public:
  TestamentSpec() = default;
  TestamentSpec(std::vector<std::string> jewish, std::vector<std::string> christian);

  /// Reads `{"jewish": [...], "christian": [...]}`.
  static TestamentSpec from_json(std::istream& in);
  static TestamentSpec load(const std::string& path);

  /// The 39-book Jewish and 27-book Christian canon.
  static TestamentSpec standard();

  std::optional<Testament> testament_of(std::string_view book) const;

  const std::vector<std::string>& jewish_books() const { return jewish_; }
  const std::vector<std::string>& christian_books() const { return christian_; }

 private:
  std::vector<std::string> jewish_;
  std::vector<std::string> christian_;
  std::unordered_map<std::string, Testament> index_;
};

}  // namespace intertext
