// Copyright 2026 The latebench Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latebench/embedding.hpp"
#include "latebench/interchange.hpp"

namespace latebench {

enum class IndexMode : std::uint64_t { kMultiVector = 0, kPooled = 1, kBinary = 2 };

enum class Precision : std::uint64_t { kFp32 = 0, kFp16 = 1, kInt8 = 2, kBit1 = 3 };

std::string_view to_string(IndexMode mode);
std::string_view to_string(Precision precision);
IndexMode parse_index_mode(std::string_view name);
Precision parse_precision(std::string_view name);

/// Bits used to store one embedding element (32, 16, 8 or 1).
unsigned bits_per_element(Precision precision) noexcept;

/// Throws InvalidArgument unless the pair is supported: bit1 goes with binary
/// mode and nothing else, binary mode requires bit1.
void validate_mode_precision(IndexMode mode, Precision precision);

struct SearchResult {
  std::string doc_id;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

struct IndexStats {
  IndexMode mode{};
  Precision precision{};
  std::size_t dim = 0;
  std::size_t doc_count = 0;
  std::size_t total_token_count = 0;
  double mean_rows = 0.0;
  double elements_per_doc = 0.0;
  std::uint64_t disk_bytes = 0;
};

/// Exact brute-force index over document embeddings stored at a fixed
/// precision. Immutable once built; any number of threads may search it.
///
/// fp16 values are IEEE binary16 (round-to-nearest-even). int8 rows use
/// symmetric linear quantization with one fp32 scale per row
/// (scale = max|x| / 127). Scores are always computed from the stored
/// representation, so an index reloaded from disk scores bit-identically.
class CorpusIndex {
 public:
  struct Entry {
    std::string id;
    std::size_t rows = 0;
    /// Stored representation, exactly as serialized (little-endian).
    std::vector<std::byte> payload;
    /// Dequantized values (rows * dim); empty in binary mode.
    std::vector<double> values;
    /// Packed sign bits; binary mode only.
    std::vector<std::uint64_t> bits;
  };

  /// Throws InvalidArgument on: no records, duplicate ids, inconsistent dims,
  /// an unsupported mode/precision pair, or a record kind that the mode cannot
  /// hold (pooled mode takes only pooled vectors).
  static CorpusIndex build(std::span<const EmbeddingRecord> records,
                           IndexMode mode, Precision precision);

  IndexMode mode() const noexcept { return mode_; }
  Precision precision() const noexcept { return precision_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t doc_count() const noexcept { return entries_.size(); }
  std::size_t total_token_count() const noexcept { return total_tokens_; }
  std::span<const Entry> entries() const noexcept { return entries_; }

  /// Score of one stored document against a multi-vector query (multi_vector
  /// and binary modes) or a pooled query (pooled mode).
  double score(const Entry& doc, const TokenMatrix& query,
               SimilarityKind kind) const;
  double score(const Entry& doc, const PooledVector& query,
               SimilarityKind kind) const;

  /// Top-min(k, doc_count) documents, best first, ties by ascending doc id.
  /// Multi-vector queries apply to multi_vector and binary indexes; pooled
  /// queries apply to pooled indexes.
  std::vector<SearchResult> search(const TokenMatrix& query, std::size_t k,
                                   SimilarityKind kind = SimilarityKind::kDot) const;
  std::vector<SearchResult> search(const PooledVector& query, std::size_t k,
                                   SimilarityKind kind = SimilarityKind::kDot) const;
  std::vector<SearchResult> search(const EmbeddingRecord& query, std::size_t k,
                                   SimilarityKind kind = SimilarityKind::kDot) const;

  IndexStats stats() const;

  /// Byte size of the serialized file.
  std::uint64_t serialized_size() const;

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static CorpusIndex load(std::istream& in);
  static CorpusIndex load(const std::filesystem::path& path);

 private:
  CorpusIndex(IndexMode mode, Precision precision, std::size_t dim)
      : mode_(mode), precision_(precision), dim_(dim) {}

  void add_entry(std::string id, std::size_t rows, std::vector<std::byte> payload);
  void decode(Entry& entry) const;
  double binary_score(const Entry& doc, const BinaryMatrix& query) const;
  std::vector<SearchResult> rank(std::vector<SearchResult> scored,
                                 std::size_t k) const;
  void check_query_dim(std::size_t dim) const;

  IndexMode mode_;
  Precision precision_;
  std::size_t dim_;
  std::size_t total_tokens_ = 0;
  std::vector<Entry> entries_;
};

/// Stored byte size of one document's payload.
std::size_t payload_bytes(Precision precision, std::size_t rows, std::size_t dim);

/// Encodes `values` (rows * dim) in the stored representation.
std::vector<std::byte> encode_payload(Precision precision, std::size_t rows,
                                      std::size_t dim,
                                      std::span<const double> values);

std::vector<SearchResult> search(const CorpusIndex& index,
                                 const EmbeddingRecord& query, std::size_t k,
                                 SimilarityKind kind = SimilarityKind::kDot);

IndexStats index_stats(const CorpusIndex& index);

}  // namespace latebench
