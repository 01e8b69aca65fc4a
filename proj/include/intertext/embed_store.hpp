// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intertext/verse_ref.hpp"

namespace intertext {

/// Unit-length copy of `v`, computed in double and rounded to float.
/// Throws NumericError on an empty, zero or non-finite vector.
std::vector<float> normalize(std::span<const float> v);

/// Dot product of two unit vectors, accumulated in double and clamped to
/// [-1, 1]. Throws ValidationError on a dimension mismatch.
double cosine(std::span<const float> u, std::span<const float> v);

/// `corpus_id|BOOK.ch.vs`
std::string embedding_key(std::string_view corpus_id, const VerseRef& ref);

/// Unit-norm verse vectors keyed by (corpus, verse). Single writer while
/// being filled, then safe for concurrent reads.
class EmbeddingStore {
 public:
  static constexpr double kNormTolerance = 1e-4;

  explicit EmbeddingStore(std::uint32_t dim);

  std::uint32_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

  /// Normalizes and stores. Throws DuplicateKeyError on a repeated key.
  void insert(std::string_view corpus_id, const VerseRef& ref, std::span<const float> v);

  /// Stores `v` bit-for-bit; it must already be unit-norm within
  /// kNormTolerance.
  void insert_unit(std::string key, std::vector<float> v);

  bool contains(std::string_view corpus_id, const VerseRef& ref) const;

  /// Throws MissingEmbeddingError naming the key.
  std::span<const float> at(std::string_view corpus_id, const VerseRef& ref) const;

  /// Cosine between two verses of one corpus. Operands are put in key order
  /// first, so the result is symmetric bit-for-bit.
  double similarity(std::string_view corpus_id, const VerseRef& a, const VerseRef& b) const;

  /// Adds every record of `other`; dims must agree and keys must not clash.
  void merge(const EmbeddingStore& other);

  /// Records ascending by key bytes.
  const std::map<std::string, std::vector<float>>& records() const { return vectors_; }

  friend bool operator==(const EmbeddingStore&, const EmbeddingStore&) = default;

 private:
  std::uint32_t dim_;
  std::map<std::string, std::vector<float>> vectors_;
};

/// ITXE: little-endian `ITXE` | u32 version | u32 dim | u64 count, then per
/// record u16 key_len | key | dim x f32, ascending by key.
inline constexpr std::uint32_t kItxeVersion = 1;

void save_store(const EmbeddingStore& store, std::ostream& out);
/// Throws FormatError with the byte offset of the first bad field.
EmbeddingStore load_store(std::istream& in);

void save_store_file(const EmbeddingStore& store, const std::string& path);
EmbeddingStore load_store_file(const std::string& path);

struct RemoteOptions {
  std::size_t batch_size = 32;
  int retries = 2;
  std::chrono::milliseconds timeout{30000};
  std::chrono::milliseconds retry_backoff{200};
  /// Bearer token; empty means no Authorization header.
  std::string token;
};

/// Reads INTERTEXT_EMBED_TOKEN into `options.token` when set.
RemoteOptions remote_options_from_env(RemoteOptions options = {});

/// POSTs `{"texts": [...]}` to `endpoint` in batches and returns one
/// normalized vector per text, in input order.
std::vector<std::vector<float>> fetch_remote(std::span<const std::string> texts, const std::string& endpoint,
                                             const RemoteOptions& options);

}  // namespace intertext
