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

#include "latebench/compression.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "latebench/error.hpp"

namespace latebench {

Projection Projection::identity(std::size_t dim) {
  Projection p{dim, dim, std::vector<double>(dim * dim, 0.0)};
  for (std::size_t i = 0; i < dim; ++i) p.weights[i * dim + i] = 1.0;
  return p;
}

void Projection::validate() const {
  if (in_dim == 0 || out_dim == 0) {
    throw InvalidArgument("projection needs in_dim >= 1 and out_dim >= 1");
  }
  if (weights.size() != in_dim * out_dim) {
    throw InvalidArgument("projection weights hold " +
                          std::to_string(weights.size()) + " values, expected " +
                          std::to_string(in_dim * out_dim));
  }
}

TokenMatrix project(const TokenMatrix& m, const Projection& w) {
  w.validate();
  if (w.in_dim != m.dim()) {
    throw InvalidArgument("project: matrix dim " + std::to_string(m.dim()) +
                          " does not match projection input dim " +
                          std::to_string(w.in_dim));
  }
  std::vector<double> out(m.rows() * w.out_dim, 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto x = m.row(r);
    double* y = out.data() + r * w.out_dim;
    for (std::size_t i = 0; i < w.in_dim; ++i) {
      const double xi = x[i];
      const double* wrow = w.weights.data() + i * w.out_dim;
      for (std::size_t j = 0; j < w.out_dim; ++j) y[j] += xi * wrow[j];
    }
  }
  return TokenMatrix::from_rows_normalized(m.id(), m.rows(), w.out_dim, out);
}

std::vector<std::uint64_t> pack_signs(std::span<const double> row) {
  std::vector<std::uint64_t> words(BinaryMatrix::words_per_row(row.size()), 0);
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (!std::isfinite(row[j])) {
      throw InvalidArgument("binary_quantize: non-finite value");
    }
    // 0 (and -0) map to 1.
    if (row[j] >= 0.0) words[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  return words;
}

BinaryMatrix binary_quantize(const TokenMatrix& m) {
  std::vector<std::uint64_t> words;
  words.reserve(m.rows() * BinaryMatrix::words_per_row(m.dim()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto packed = pack_signs(m.row(i));
    words.insert(words.end(), packed.begin(), packed.end());
  }
  return BinaryMatrix(m.id(), m.rows(), m.dim(), std::move(words));
}

std::size_t hamming_distance(std::span<const std::uint64_t> a,
                             std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("hamming_distance: word count mismatch");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::popcount(a[i] ^ b[i]);
  return d;
}

double hamming_similarity(std::span<const std::uint64_t> a,
                          std::span<const std::uint64_t> b, std::size_t dim) {
  if (dim == 0 || a.size() != BinaryMatrix::words_per_row(dim) ||
      b.size() != a.size()) {
    throw InvalidArgument("hamming_similarity: dimension mismatch");
  }
  const double d = static_cast<double>(hamming_distance(a, b));
  return (static_cast<double>(dim) - d) / static_cast<double>(dim);
}

double hamming_similarity(const BinaryMatrix& a, std::size_t row_a,
                          const BinaryMatrix& b, std::size_t row_b) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument("hamming_similarity: dimension mismatch (" +
                          std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()) + ")");
  }
  return hamming_similarity(a.row(row_a), b.row(row_b), a.dim());
}

double binary_maxsim_score(const BinaryMatrix& query, const BinaryMatrix& doc) {
  if (query.dim() != doc.dim()) {
    throw InvalidArgument("binary_maxsim_score: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < query.rows(); ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j < doc.rows(); ++j) {
      best = std::max(best, hamming_similarity(query.row(i), doc.row(j),
                                               query.dim()));
    }
    total += best;
  }
  return total;
}

}  // namespace latebench
