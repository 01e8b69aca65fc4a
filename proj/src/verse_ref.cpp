// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#include "intertext/verse_ref.hpp"

#include <fstream>
#include <functional>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "intertext/error.hpp"
#include "text_util.hpp"

namespace intertext {
namespace {

const std::vector<std::string> kJewish = {
    "GEN", "EXO", "LEV", "NUM", "DEU", "JOS", "JDG", "RUT", "1SA", "2SA",
    "1KI", "2KI", "1CH", "2CH", "EZR", "NEH", "EST", "JOB", "PSA", "PRO",
    "ECC", "SNG", "ISA", "JER", "LAM", "EZK", "DAN", "HOS", "JOL", "AMO",
    "OBA", "JON", "MIC", "NAM", "HAB", "ZEP", "HAG", "ZEC", "MAL"};

const std::vector<std::string> kChristian = {
    "MAT", "MRK", "LUK", "JHN", "ACT", "ROM", "1CO", "2CO", "GAL",
    "EPH", "PHP", "COL", "1TH", "2TH", "1TI", "2TI", "TIT", "PHM",
    "HEB", "JAS", "1PE", "2PE", "1JN", "2JN", "3JN", "JUD", "REV"};

const std::unordered_map<std::string, std::size_t>& rank_index() {
  static const auto index = [] {
    std::unordered_map<std::string, std::size_t> m;
    for (const auto& b : canonical_books()) m.emplace(b, m.size());
    return m;
  }();
  return index;
}

}  // namespace

bool is_valid_book_code(std::string_view code) {
  if (code.size() < 2 || code.size() > 5) return false;
  for (char c : code) {
    if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) return false;
  }
  return true;
}

const std::vector<std::string>& canonical_books() {
  static const auto all = [] {
    std::vector<std::string> v = kJewish;
    v.insert(v.end(), kChristian.begin(), kChristian.end());
    return v;
  }();
  return all;
}

std::optional<std::size_t> canonical_book_rank(std::string_view code) {
  const auto& idx = rank_index();
  auto it = idx.find(std::string(code));
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

VerseRef VerseRef::make(std::string_view book, std::uint32_t chapter, std::uint32_t verse) {
  if (!is_valid_book_code(book)) throw ParseError(fmt::format("invalid book code '{}'", book), 0);
  if (chapter == 0 || verse == 0) {
    throw ParseError(fmt::format("chapter and verse must be >= 1 in {}.{}.{}", book, chapter, verse), 0);
  }
  return VerseRef{std::string(book), chapter, verse};
}

VerseRef VerseRef::parse(std::string_view token) {
  auto d1 = token.find('.');
  auto d2 = d1 == std::string_view::npos ? d1 : token.find('.', d1 + 1);
  if (d2 == std::string_view::npos || token.find('.', d2 + 1) != std::string_view::npos) {
    throw ParseError(fmt::format("malformed verse reference '{}'", token), 0);
  }
  auto ch = detail::parse_uint(token.substr(d1 + 1, d2 - d1 - 1));
  auto vs = detail::parse_uint(token.substr(d2 + 1));
  if (!ch || !vs) throw ParseError(fmt::format("malformed verse reference '{}'", token), 0);
  return make(token.substr(0, d1), *ch, *vs);
}

std::string VerseRef::str() const { return fmt::format("{}.{}.{}", book, chapter, verse); }

std::strong_ordering operator<=>(const VerseRef& a, const VerseRef& b) {
  if (a.book != b.book) {
    auto ra = canonical_book_rank(a.book);
    auto rb = canonical_book_rank(b.book);
    if (ra && rb) return *ra <=> *rb;
    if (ra) return std::strong_ordering::less;
    if (rb) return std::strong_ordering::greater;
    return a.book.compare(b.book) <=> 0;
  }
  if (auto c = a.chapter <=> b.chapter; c != 0) return c;
  return a.verse <=> b.verse;
}

std::size_t VerseRefHash::operator()(const VerseRef& r) const noexcept {
  std::size_t h = std::hash<std::string>{}(r.book);
  h ^= (static_cast<std::size_t>(r.chapter) << 20 ^ r.verse) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

TestamentSpec::TestamentSpec(std::vector<std::string> jewish, std::vector<std::string> christian)
    : jewish_(std::move(jewish)), christian_(std::move(christian)) {
  auto add = [this](const std::vector<std::string>& books, Testament t) {
    for (const auto& b : books) {
      if (!is_valid_book_code(b)) throw ConfigError(fmt::format("testament spec: invalid book code '{}'", b));
      if (!index_.emplace(b, t).second) {
        throw ConfigError(fmt::format("testament spec: book '{}' listed more than once", b));
      }
    }
  };
  add(jewish_, Testament::jewish);
  add(christian_, Testament::christian);
}

TestamentSpec TestamentSpec::from_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("testament spec: ") + e.what());
  }
  auto list = [&](const char* key) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_array()) {
      throw ConfigError(fmt::format("testament spec: missing array '{}'", key));
    }
    std::vector<std::string> out;
    for (const auto& v : j[key]) {
      if (!v.is_string()) throw ConfigError(fmt::format("testament spec: non-string entry in '{}'", key));
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  return TestamentSpec(list("jewish"), list("christian"));
}

TestamentSpec TestamentSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open testament spec '{}'", path));
  return from_json(in);
}

TestamentSpec TestamentSpec::standard() { return TestamentSpec(kJewish, kChristian); }

std::optional<Testament> TestamentSpec::testament_of(std::string_view book) const {
  auto it = index_.find(std::string(book));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace intertext
