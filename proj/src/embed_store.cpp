// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#include "intertext/embed_store.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "intertext/error.hpp"
#include "intertext/http.hpp"

namespace intertext {

std::vector<float> normalize(std::span<const float> v) {
  if (v.empty()) throw NumericError("cannot normalize an empty vector");
  double sq = 0.0;
  for (float x : v) {
    if (!std::isfinite(x)) throw NumericError("vector has a non-finite element");
    sq += static_cast<double>(x) * x;
  }
  if (sq == 0.0) throw NumericError("cannot normalize a zero-norm vector");
  const double norm = std::sqrt(sq);
  std::vector<float> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [norm](float x) { return static_cast<float>(x / norm); });
  return out;
}

double cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw ValidationError(fmt::format("cosine of vectors with dims {} and {}", u.size(), v.size()));
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += static_cast<double>(u[i]) * v[i];
  return std::clamp(dot, -1.0, 1.0);
}

std::string embedding_key(std::string_view corpus_id, const VerseRef& ref) {
  std::string key(corpus_id);
  key += '|';
  key += ref.str();
  return key;
}

namespace {

double norm_of(std::span<const float> v) {
  double sq = 0.0;
  for (float x : v) sq += static_cast<double>(x) * x;
  return std::sqrt(sq);
}

}  // namespace

EmbeddingStore::EmbeddingStore(std::uint32_t dim) : dim_(dim) {
  if (dim == 0) throw ValidationError("embedding dimension must be positive");
}

void EmbeddingStore::insert(std::string_view corpus_id, const VerseRef& ref, std::span<const float> v) {
  if (v.size() != dim_) {
    throw ValidationError(fmt::format("vector for {} has dim {}, store has {}", embedding_key(corpus_id, ref),
                                      v.size(), dim_));
  }
  auto key = embedding_key(corpus_id, ref);
  if (vectors_.count(key)) throw DuplicateKeyError(fmt::format("duplicate embedding key '{}'", key));
  vectors_.emplace(std::move(key), normalize(v));
}

void EmbeddingStore::insert_unit(std::string key, std::vector<float> v) {
  if (v.size() != dim_) throw ValidationError(fmt::format("vector for {} has dim {}, store has {}", key, v.size(), dim_));
  if (!std::all_of(v.begin(), v.end(), [](float x) { return std::isfinite(x); }) ||
      std::abs(norm_of(v) - 1.0) > kNormTolerance) {
    throw ValidationError(fmt::format("vector for {} is not unit-norm", key));
  }
  if (vectors_.count(key)) throw DuplicateKeyError(fmt::format("duplicate embedding key '{}'", key));
  vectors_.emplace(std::move(key), std::move(v));
}

bool EmbeddingStore::contains(std::string_view corpus_id, const VerseRef& ref) const {
  return vectors_.count(embedding_key(corpus_id, ref)) > 0;
}

std::span<const float> EmbeddingStore::at(std::string_view corpus_id, const VerseRef& ref) const {
  auto key = embedding_key(corpus_id, ref);
  auto it = vectors_.find(key);
  if (it == vectors_.end()) throw MissingEmbeddingError(fmt::format("no embedding for '{}'", key));
  return it->second;
}

double EmbeddingStore::similarity(std::string_view corpus_id, const VerseRef& a, const VerseRef& b) const {
  auto ka = embedding_key(corpus_id, a);
  auto kb = embedding_key(corpus_id, b);
  if (kb < ka) std::swap(ka, kb);
  auto find = [&](const std::string& key) -> const std::vector<float>& {
    auto it = vectors_.find(key);
    if (it == vectors_.end()) throw MissingEmbeddingError(fmt::format("no embedding for '{}'", key));
    return it->second;
  };
  return cosine(find(ka), find(kb));
}

void EmbeddingStore::merge(const EmbeddingStore& other) {
  if (other.dim_ != dim_) throw ValidationError(fmt::format("cannot merge dim {} store into dim {}", other.dim_, dim_));
  for (const auto& [key, v] : other.vectors_) {
    if (vectors_.count(key)) throw DuplicateKeyError(fmt::format("duplicate embedding key '{}'", key));
  }
  for (const auto& [key, v] : other.vectors_) vectors_.emplace(key, v);
}

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

class ByteReader {
 public:
  explicit ByteReader(std::string data) : data_(std::move(data)) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

  template <typename T>
  T get(const char* what) {
    need(sizeof(T), what);
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return v;
  }

  std::string_view bytes(std::size_t n, const char* what) {
    need(n, what);
    std::string_view out(data_.data() + pos_, n);
    pos_ += n;
    return out;
  }

 private:
  void need(std::size_t n, const char* what) const {
    if (remaining() < n) throw FormatError(fmt::format("truncated {}", what), pos_);
  }

  std::string data_;
  std::size_t pos_ = 0;
};

void validate_key(std::string_view key, std::size_t offset) {
  auto bar = key.find('|');
  if (bar == std::string_view::npos || bar == 0) throw FormatError(fmt::format("malformed key '{}'", key), offset);
  try {
    VerseRef::parse(key.substr(bar + 1));
  } catch (const ParseError&) {
    throw FormatError(fmt::format("malformed key '{}'", key), offset);
  }
}

}  // namespace

void save_store(const EmbeddingStore& store, std::ostream& out) {
  out.write("ITXE", 4);
  put_le<std::uint32_t>(out, kItxeVersion);
  put_le<std::uint32_t>(out, store.dim());
  put_le<std::uint64_t>(out, store.size());
  for (const auto& [key, v] : store.records()) {
    if (key.size() > 0xffff) throw ValidationError(fmt::format("embedding key too long: '{}'", key));
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(key.size()));
    out.write(key.data(), static_cast<std::streamsize>(key.size()));
    for (float x : v) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(x));
  }
  if (!out) throw Error("failed writing embedding store");
}

EmbeddingStore load_store(std::istream& in) {
  ByteReader r{std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>())};
  if (r.bytes(4, "magic") != "ITXE") throw FormatError("bad magic (expected ITXE)", 0);
  auto version = r.get<std::uint32_t>("version");
  if (version != kItxeVersion) throw FormatError(fmt::format("unsupported version {}", version), 4);
  auto dim = r.get<std::uint32_t>("dim");
  if (dim == 0) throw FormatError("dimension is zero", 8);
  auto count = r.get<std::uint64_t>("record count");
  // Every record holds at least a key length, one key byte and the vector.
  const std::uint64_t min_record = 2 + 1 + 4ULL * dim;
  if (count > r.remaining() / min_record) {
    throw FormatError(fmt::format("truncated: header declares {} records", count), r.offset());
  }

  EmbeddingStore store(dim);
  std::string previous;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::size_t record_start = r.offset();
    auto key_len = r.get<std::uint16_t>("key length");
    if (key_len == 0) throw FormatError("empty key", record_start);
    std::string key(r.bytes(key_len, "key"));
    validate_key(key, record_start);
    if (i > 0 && key <= previous) {
      throw FormatError(key == previous ? fmt::format("duplicate key '{}'", key)
                                        : fmt::format("record '{}' out of key order", key),
                        record_start);
    }
    const std::size_t vec_start = r.offset();
    std::vector<float> v(dim);
    for (auto& x : v) x = std::bit_cast<float>(r.get<std::uint32_t>("vector"));
    try {
      store.insert_unit(key, std::move(v));
    } catch (const ValidationError& e) {
      throw FormatError(e.what(), vec_start);
    }
    previous = std::move(key);
  }
  if (r.remaining() != 0) throw FormatError(fmt::format("{} trailing bytes", r.remaining()), r.offset());
  return store;
}

void save_store_file(const EmbeddingStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write '{}'", path));
  save_store(store, out);
}

EmbeddingStore load_store_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open embedding store '{}'", path));
  return load_store(in);
}

RemoteOptions remote_options_from_env(RemoteOptions options) {
  if (const char* token = std::getenv("INTERTEXT_EMBED_TOKEN")) options.token = token;
  return options;
}

namespace {

std::vector<std::vector<float>> request_batch(std::span<const std::string> texts, const std::string& endpoint,
                                              const RemoteOptions& options) {
  const std::string body = nlohmann::json{{"texts", texts}}.dump();
  std::string last_error;
  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options.retry_backoff * attempt);
    HttpResponse res;
    try {
      res = post_json(endpoint, body, options.token, options.timeout);
    } catch (const RemoteError& e) {
      last_error = e.what();
      continue;
    }
    if (res.status >= 500 || res.status == 429) {
      last_error = fmt::format("HTTP {}", res.status);
      continue;
    }
    if (res.status != 200) throw RemoteError(fmt::format("embedding service returned HTTP {}", res.status));

    nlohmann::json j = nlohmann::json::parse(res.body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("embeddings") || !j["embeddings"].is_array()) {
      throw ProtocolError("embedding response lacks an 'embeddings' array");
    }
    const auto& rows = j["embeddings"];
    if (rows.size() != texts.size()) {
      throw ProtocolError(fmt::format("sent {} texts, received {} embeddings", texts.size(), rows.size()));
    }
    std::vector<std::vector<float>> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
      if (!row.is_array() || row.empty()) throw ProtocolError("embedding is not a non-empty array");
      std::vector<float> v;
      v.reserve(row.size());
      for (const auto& x : row) {
        if (!x.is_number()) throw ProtocolError("embedding has a non-numeric element");
        v.push_back(x.get<float>());
      }
      out.push_back(std::move(v));
    }
    return out;
  }
  throw RemoteError(fmt::format("embedding request to {} failed after {} attempts: {}", endpoint,
                                options.retries + 1, last_error));
}

}  // namespace

std::vector<std::vector<float>> fetch_remote(std::span<const std::string> texts, const std::string& endpoint,
                                             const RemoteOptions& options) {
  if (options.batch_size == 0) throw ConfigError("batch size must be positive");
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) throw ValidationError(fmt::format("text {} is empty", i));
  }
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  for (std::size_t start = 0; start < texts.size(); start += options.batch_size) {
    auto batch = texts.subspan(start, std::min(options.batch_size, texts.size() - start));
    for (auto& v : request_batch(batch, endpoint, options)) {
      if (!out.empty() && v.size() != out.front().size()) {
        throw ProtocolError(fmt::format("embedding dimension changed from {} to {}", out.front().size(), v.size()));
      }
      out.push_back(normalize(v));
    }
  }
  return out;
}

}  // namespace intertext
