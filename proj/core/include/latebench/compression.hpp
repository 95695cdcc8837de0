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
#include <vector>

#include "latebench/embedding.hpp"

namespace latebench {

/// Dense row-major projection matrix with `in_dim` rows and `out_dim` columns.
struct Projection {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<double> weights;

  double at(std::size_t i, std::size_t j) const noexcept {
    return weights[i * out_dim + j];
  }

  static Projection identity(std::size_t dim);
  /// Checks weights.size() == in_dim * out_dim and both dims >= 1.
  void validate() const;
};

/// Right-multiplies every row by `w`, then renormalizes each row.
TokenMatrix project(const TokenMatrix& m, const Projection& w);

/// Sign quantization: bit (i, j) is 1 iff value(i, j) >= 0.
BinaryMatrix binary_quantize(const TokenMatrix& m);

/// Packs one row of real values into 64-bit words with the same sign rule.
std::vector<std::uint64_t> pack_signs(std::span<const double> row);

std::size_t hamming_distance(std::span<const std::uint64_t> a,
                             std::span<const std::uint64_t> b);

/// (dim - hamming_distance) / dim, in [0, 1]. Both rows must hold `dim` bits.
double hamming_similarity(std::span<const std::uint64_t> a,
                          std::span<const std::uint64_t> b, std::size_t dim);

/// Row-wise convenience overload; throws on a dim mismatch.
double hamming_similarity(const BinaryMatrix& a, std::size_t row_a,
                          const BinaryMatrix& b, std::size_t row_b);

/// MaxSim over binary rows: sum over query rows of the best hamming_similarity.
double binary_maxsim_score(const BinaryMatrix& query, const BinaryMatrix& doc);

}  // namespace latebench
