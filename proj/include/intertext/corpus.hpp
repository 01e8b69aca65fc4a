// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "intertext/verse_ref.hpp"

namespace intertext {

enum class Provenance { original, human, machine };

std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view s);

/// One edition or translation, keyed by canonical verse. Immutable once
/// built; all accessors are const.
class Corpus {
 public:
  using VerseMap = std::map<VerseRef, std::string>;

  Corpus() = default;
  Corpus(std::string id, std::string language, Provenance provenance, VerseMap verses = {});

  const std::string& id() const { return id_; }
  const std::string& language() const { return language_; }
  Provenance provenance() const { return provenance_; }
  const VerseMap& verses() const { return verses_; }
  std::size_t size() const { return verses_.size(); }

  /// Verse text, or nullopt when the corpus lacks the verse.
  std::optional<std::string_view> resolve(const VerseRef& ref) const;

  /// All verses of one chapter, ascending by verse number.
  std::vector<VerseRef> chapter_verses(std::string_view book, std::uint32_t chapter) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::string id_;
  std::string language_;
  Provenance provenance_ = Provenance::original;
  VerseMap verses_;
};

/// Reads the headerless `book<TAB>chapter<TAB>verse<TAB>text` format.
/// Blank lines and `#` comments are skipped; book codes are upper-cased.
Corpus parse_corpus(std::istream& in, std::string id, std::string language, Provenance provenance);

Corpus load_corpus(const std::string& path, std::string id, std::string language, Provenance provenance);

/// Writes the TSV format in canonical verse order.
void write_corpus(const Corpus& corpus, std::ostream& out);

/// Checks that `text` can be stored as a verse: non-blank, no TAB/CR/LF.
bool is_storable_verse_text(std::string_view text);

struct VersificationEntry {
  VerseRef source;
  VerseRef canonical;
};

/// Per-corpus mapping from edition-specific to canonical verse numbers.
class VersificationMap {
 public:
  VersificationMap() = default;
  /// Throws ValidationError when sources or targets repeat.
  VersificationMap(std::string corpus_id, std::vector<VersificationEntry> entries);

  const std::string& corpus_id() const { return corpus_id_; }
  const std::vector<VersificationEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  VersificationMap inverse() const;

 private:
  std::string corpus_id_;
  std::vector<VersificationEntry> entries_;
};

/// Reads `corpus_id<TAB>BOOK.ch.vs<TAB>BOOK.ch.vs` lines.
VersificationMap parse_versification(std::istream& in);
VersificationMap load_versification(const std::string& path);

struct VersificationResult {
  Corpus corpus;
  /// Map sources not present in the corpus. Not fatal.
  std::vector<VerseRef> missing_sources;
};

/// Re-keys mapped verses to their canonical addresses. Throws
/// CollisionError when a target is already held by a verse that stays put.
VersificationResult apply_versification(const Corpus& corpus, const VersificationMap& map);

}  // namespace intertext
