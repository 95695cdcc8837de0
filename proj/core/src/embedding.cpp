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

#include "latebench/embedding.hpp"

#include <cmath>
#include <string>

#include "latebench/error.hpp"

namespace latebench {

std::string_view to_string(SimilarityKind kind) {
  return kind == SimilarityKind::kDot ? "dot" : "cosine";
}

std::string_view to_string(Pooling pooling) {
  return pooling == Pooling::kMean ? "mean" : "last_token";
}

SimilarityKind parse_similarity_kind(std::string_view name) {
  if (name == "dot") return SimilarityKind::kDot;
  if (name == "cosine") return SimilarityKind::kCosine;
  throw InvalidArgument("unknown similarity kind '" + std::string(name) +
                        "' (expected dot|cosine)");
}

Pooling parse_pooling(std::string_view name) {
  if (name == "mean") return Pooling::kMean;
  if (name == "last_token" || name == "last") return Pooling::kLastToken;
  throw InvalidArgument("unknown pooling '" + std::string(name) +
                        "' (expected mean|last_token)");
}

double l2_norm(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

std::vector<double> normalized(std::span<const double> v) {
  const double n = l2_norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvalidArgument("cannot normalize a zero-norm or non-finite vector");
  }
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= n;
  return out;
}

TokenMatrix::TokenMatrix(std::string id, std::size_t rows, std::size_t dim,
                         std::vector<double> values, bool normalized)
    : id_(std::move(id)),
      rows_(rows),
      dim_(dim),
      values_(std::move(values)),
      normalized_(normalized) {
  if (rows_ == 0 || dim_ == 0) {
    throw InvalidArgument("token matrix '" + id_ +
                          "' must have at least one row and one column");
  }
  if (values_.size() != rows_ * dim_) {
    throw InvalidArgument("token matrix '" + id_ + "' expects " +
                          std::to_string(rows_ * dim_) + " values, got " +
                          std::to_string(values_.size()));
  }
  for (double x : values_) {
    if (!std::isfinite(x)) {
      throw InvalidArgument("token matrix '" + id_ +
                            "' contains a non-finite value");
    }
  }
  if (normalized_) {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (std::abs(l2_norm(row(i)) - 1.0) > kUnitNormTolerance) {
        throw InvalidArgument("token matrix '" + id_ + "' row " +
                              std::to_string(i) +
                              " is flagged normalized but is not unit norm");
      }
    }
  }
}

TokenMatrix TokenMatrix::from_rows_normalized(std::string id, std::size_t rows,
                                              std::size_t dim,
                                              std::span<const double> values) {
  if (rows == 0 || dim == 0 || values.size() != rows * dim) {
    throw InvalidArgument("token matrix '" + id + "' has inconsistent shape");
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < rows; ++i) {
    auto r = latebench::normalized(values.subspan(i * dim, dim));
    out.insert(out.end(), r.begin(), r.end());
  }
  return TokenMatrix(std::move(id), rows, dim, std::move(out), true);
}

TokenMatrix TokenMatrix::renormalized() const {
  return from_rows_normalized(id_, rows_, dim_, values_);
}

PooledVector::PooledVector(std::string id, std::span<const double> values,
                           Pooling pooling)
    : id_(std::move(id)), pooling_(pooling) {
  if (values.empty()) {
    throw InvalidArgument("pooled vector '" + id_ + "' is empty");
  }
  for (double x : values) {
    if (!std::isfinite(x)) {
      throw InvalidArgument("pooled vector '" + id_ +
                            "' contains a non-finite value");
    }
  }
  // Already unit norm (within tolerance): keep the values bit-for-bit so that
  // serialization round trips are exact.
  if (std::abs(l2_norm(values) - 1.0) <= kUnitNormTolerance) {
    values_.assign(values.begin(), values.end());
  } else {
    values_ = normalized(values);
  }
}

BinaryMatrix::BinaryMatrix(std::string id, std::size_t rows, std::size_t dim,
                           std::vector<std::uint64_t> words)
    : id_(std::move(id)), rows_(rows), dim_(dim), words_(std::move(words)) {
  if (rows_ == 0 || dim_ == 0) {
    throw InvalidArgument("binary matrix '" + id_ + "' is empty");
  }
  if (words_.size() != rows_ * words_per_row(dim_)) {
    throw InvalidArgument("binary matrix '" + id_ + "' has " +
                          std::to_string(words_.size()) + " words, expected " +
                          std::to_string(rows_ * words_per_row(dim_)));
  }
}

}  // namespace latebench
