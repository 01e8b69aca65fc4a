// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#include "intertext/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "intertext/error.hpp"
#include "text_util.hpp"

namespace intertext {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::original: return "original";
    case Provenance::human: return "human";
    case Provenance::machine: return "machine";
  }
  return "original";
}

Provenance parse_provenance(std::string_view s) {
  if (s == "original") return Provenance::original;
  if (s == "human") return Provenance::human;
  if (s == "machine") return Provenance::machine;
  throw ConfigError(fmt::format("unknown provenance '{}' (expected original, human or machine)", s));
}

Corpus::Corpus(std::string id, std::string language, Provenance provenance, VerseMap verses)
    : id_(std::move(id)), language_(std::move(language)), provenance_(provenance), verses_(std::move(verses)) {
  for (const auto& [ref, text] : verses_) {
    if (!is_storable_verse_text(text)) {
      throw ValidationError(fmt::format("corpus '{}': verse {} has empty or multi-line text", id_, ref.str()));
    }
  }
}

std::optional<std::string_view> Corpus::resolve(const VerseRef& ref) const {
  auto it = verses_.find(ref);
  if (it == verses_.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::vector<VerseRef> Corpus::chapter_verses(std::string_view book, std::uint32_t chapter) const {
  std::vector<VerseRef> out;
  // Keys are ordered (book, chapter, verse); verse 0 sorts before any real verse.
  VerseRef first{std::string(book), chapter, 0};
  for (auto it = verses_.lower_bound(first); it != verses_.end(); ++it) {
    if (it->first.book != book || it->first.chapter != chapter) break;
    out.push_back(it->first);
  }
  return out;
}

bool is_storable_verse_text(std::string_view text) {
  if (text.find_first_of("\t\r\n") != std::string_view::npos) return false;
  return !detail::trim(text).empty();
}

Corpus parse_corpus(std::istream& in, std::string id, std::string language, Provenance provenance) {
  Corpus::VerseMap verses;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (line.back() == '\r') throw ParseError("carriage return in corpus line (LF line endings required)", lineno);
    auto cols = detail::split(line, '\t');
    if (cols.size() != 4) {
      throw ParseError(fmt::format("expected 4 tab-separated columns, found {}", cols.size()), lineno);
    }
    auto chapter = detail::parse_uint(cols[1]);
    auto verse = detail::parse_uint(cols[2]);
    if (!chapter || !verse) throw ParseError("chapter and verse must be positive integers", lineno);
    VerseRef ref;
    try {
      ref = VerseRef::make(detail::to_upper(cols[0]), *chapter, *verse);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    if (detail::trim(cols[3]).empty()) throw ParseError("empty verse text", lineno);
    auto [it, inserted] = verses.emplace(ref, std::string(cols[3]));
    if (!inserted) {
      throw DuplicateKeyError(fmt::format("corpus '{}': duplicate verse {} at line {}", id, ref.str(), lineno));
    }
  }
  return Corpus(std::move(id), std::move(language), provenance, std::move(verses));
}

Corpus load_corpus(const std::string& path, std::string id, std::string language, Provenance provenance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open corpus '{}'", path));
  return parse_corpus(in, std::move(id), std::move(language), provenance);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& [ref, text] : corpus.verses()) {
    out << ref.book << '\t' << ref.chapter << '\t' << ref.verse << '\t' << text << '\n';
  }
}

VersificationMap::VersificationMap(std::string corpus_id, std::vector<VersificationEntry> entries)
    : corpus_id_(std::move(corpus_id)), entries_(std::move(entries)) {
  std::set<VerseRef> sources, targets;
  for (const auto& e : entries_) {
    if (!sources.insert(e.source).second) {
      throw ValidationError(fmt::format("versification map '{}': source {} mapped twice", corpus_id_, e.source.str()));
    }
    if (!targets.insert(e.canonical).second) {
      throw ValidationError(
          fmt::format("versification map '{}': target {} mapped twice", corpus_id_, e.canonical.str()));
    }
  }
}

VersificationMap VersificationMap::inverse() const {
  std::vector<VersificationEntry> inv;
  inv.reserve(entries_.size());
  for (const auto& e : entries_) inv.push_back({e.canonical, e.source});
  return VersificationMap(corpus_id_, std::move(inv));
}

VersificationMap parse_versification(std::istream& in) {
  std::string corpus_id;
  std::vector<VersificationEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cols = detail::split(line, '\t');
    if (cols.size() != 3) throw ParseError("expected corpus_id, source and target columns", lineno);
    if (corpus_id.empty()) {
      corpus_id = std::string(cols[0]);
    } else if (cols[0] != corpus_id) {
      throw ParseError(fmt::format("mixed corpus ids '{}' and '{}' in one map", corpus_id, cols[0]), lineno);
    }
    try {
      entries.push_back({VerseRef::parse(detail::to_upper(cols[1])), VerseRef::parse(detail::to_upper(cols[2]))});
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  try {
    return VersificationMap(std::move(corpus_id), std::move(entries));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), 0);
  }
}

VersificationMap load_versification(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open versification map '{}'", path));
  return parse_versification(in);
}

VersificationResult apply_versification(const Corpus& corpus, const VersificationMap& map) {
  if (map.empty()) return {corpus, {}};
  if (map.corpus_id() != corpus.id()) {
    throw ValidationError(
        fmt::format("versification map is for corpus '{}', not '{}'", map.corpus_id(), corpus.id()));
  }

  VersificationResult result;
  Corpus::VerseMap moved;
  std::set<VerseRef> moving;
  for (const auto& e : map.entries()) {
    auto text = corpus.resolve(e.source);
    if (!text) {
      result.missing_sources.push_back(e.source);
      continue;
    }
    moving.insert(e.source);
    moved.emplace(e.canonical, std::string(*text));
  }

  Corpus::VerseMap verses;
  for (const auto& [ref, text] : corpus.verses()) {
    if (!moving.count(ref)) verses.emplace(ref, text);
  }
  for (auto& [ref, text] : moved) {
    if (verses.count(ref)) {
      throw CollisionError(fmt::format("corpus '{}': versification target {} is already occupied", corpus.id(),
                                       ref.str()));
    }
    verses.emplace(ref, std::move(text));
  }
  result.corpus = Corpus(corpus.id(), corpus.language(), corpus.provenance(), std::move(verses));
  return result;
}

}  // namespace intertext
