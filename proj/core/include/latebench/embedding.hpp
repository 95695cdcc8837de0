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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace latebench {

inline constexpr double kUnitNormTolerance = 1e-6;

enum class SimilarityKind { kDot, kCosine };

enum class Pooling { kMean, kLastToken };

std::string_view to_string(SimilarityKind kind);
std::string_view to_string(Pooling pooling);
SimilarityKind parse_similarity_kind(std::string_view name);
Pooling parse_pooling(std::string_view name);

double l2_norm(std::span<const double> v);

/// Returns v / ||v||. Throws InvalidArgument on a zero or non-finite norm.
std::vector<double> normalized(std::span<const double> v);

/// Row-major multi-vector representation: one embedding per token.
///
/// Invariants: rows >= 1, dim >= 1, all values finite. When normalized() is
/// true every row has unit L2 norm within kUnitNormTolerance.
class TokenMatrix {
 public:
  TokenMatrix() = default;

  /// Takes values as given. `normalized` is a claim that is checked.
  TokenMatrix(std::string id, std::size_t rows, std::size_t dim,
              std::vector<double> values, bool normalized = false);

  /// Builds a matrix whose rows are L2-normalized copies of `values`.
  static TokenMatrix from_rows_normalized(std::string id, std::size_t rows,
                                          std::size_t dim,
                                          std::span<const double> values);

  const std::string& id() const noexcept { return id_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }
  bool normalized() const noexcept { return normalized_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * dim_, dim_};
  }

  double at(std::size_t i, std::size_t j) const noexcept {
    return values_[i * dim_ + j];
  }

  void set_id(std::string id) { id_ = std::move(id); }

  /// Copy with every row renormalized to unit length.
  TokenMatrix renormalized() const;

  friend bool operator==(const TokenMatrix&, const TokenMatrix&) = default;

 private:
  std::string id_;
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> values_;
  bool normalized_ = false;
};

/// Single-vector (bi-encoder) representation. Always unit norm.
class PooledVector {
 public:
  PooledVector() = default;

  /// Normalizes `values` unless already within kUnitNormTolerance of unit
  /// norm; throws on zero norm.
  PooledVector(std::string id, std::span<const double> values, Pooling pooling);

  const std::string& id() const noexcept { return id_; }
  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  Pooling pooling() const noexcept { return pooling_; }

  void set_id(std::string id) { id_ = std::move(id); }

  friend bool operator==(const PooledVector&, const PooledVector&) = default;

 private:
  std::string id_;
  std::vector<double> values_;
  Pooling pooling_ = Pooling::kMean;
};

/// Sign-quantized matrix, one bit per element, each row packed into
/// ceil(dim / 64) little-endian 64-bit words. Bit j of a row lives in word
/// j / 64 at position j % 64. Padding bits are zero.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(std::string id, std::size_t rows, std::size_t dim,
               std::vector<std::uint64_t> words);

  static constexpr std::size_t words_per_row(std::size_t dim) noexcept {
    return (dim + 63) / 64;
  }

  const std::string& id() const noexcept { return id_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  std::span<const std::uint64_t> row(std::size_t i) const noexcept {
    const std::size_t w = words_per_row(dim_);
    return {words_.data() + i * w, w};
  }

  bool bit(std::size_t i, std::size_t j) const noexcept {
    return (row(i)[j / 64] >> (j % 64)) & 1u;
  }

  std::size_t storage_bytes() const noexcept {
    return rows_ * words_per_row(dim_) * sizeof(std::uint64_t);
  }

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

 private:
  std::string id_;
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace latebench
