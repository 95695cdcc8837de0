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

#include "latebench/pooling.hpp"

#include <string>
#include <vector>

#include "latebench/error.hpp"

namespace latebench {
namespace {

std::vector<double> column_mean(const TokenMatrix& m, std::size_t begin,
                                std::size_t end) {
  std::vector<double> sum(m.dim(), 0.0);
  for (std::size_t i = begin; i < end; ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < m.dim(); ++j) sum[j] += r[j];
  }
  const double n = static_cast<double>(end - begin);
  for (double& x : sum) x /= n;
  return sum;
}

}  // namespace

PooledVector mean_pool(const TokenMatrix& m) {
  if (m.rows() == 0) throw InvalidArgument("mean_pool: empty matrix");
  auto mean = column_mean(m, 0, m.rows());
  if (l2_norm(mean) == 0.0) {
    throw InvalidArgument("mean_pool: mean of '" + m.id() + "' has zero norm");
  }
  return PooledVector(m.id(), mean, Pooling::kMean);
}

PooledVector last_token_pool(const TokenMatrix& m) {
  if (m.rows() == 0) throw InvalidArgument("last_token_pool: empty matrix");
  auto last = m.row(m.rows() - 1);
  if (l2_norm(last) == 0.0) {
    throw InvalidArgument("last_token_pool: last row of '" + m.id() +
                          "' has zero norm");
  }
  return PooledVector(m.id(), last, Pooling::kLastToken);
}

PooledVector pool(const TokenMatrix& m, Pooling pooling) {
  return pooling == Pooling::kMean ? mean_pool(m) : last_token_pool(m);
}

TokenMatrix late_pool(const TokenMatrix& m, std::size_t factor) {
  if (factor == 0) throw InvalidArgument("late_pool: factor must be >= 1");
  const std::size_t out_rows = (m.rows() + factor - 1) / factor;
  std::vector<double> values;
  values.reserve(out_rows * m.dim());
  for (std::size_t g = 0; g < out_rows; ++g) {
    const std::size_t begin = g * factor;
    const std::size_t end = std::min(begin + factor, m.rows());
    auto mean = column_mean(m, begin, end);
    if (l2_norm(mean) == 0.0) {
      throw InvalidArgument("late_pool: group " + std::to_string(g) + " of '" +
                            m.id() + "' has a zero-norm mean");
    }
    auto unit = normalized(mean);
    values.insert(values.end(), unit.begin(), unit.end());
  }
  return TokenMatrix(m.id(), out_rows, m.dim(), std::move(values), true);
}

}  // namespace latebench
