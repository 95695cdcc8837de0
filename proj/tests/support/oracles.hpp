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

// Reference implementations used only by tests. Each one follows the textbook
// definition as literally as possible and shares no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace latebench::oracle {

using Matrix = std::vector<std::vector<double>>;

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  return dot(a, b) / (std::sqrt(dot(a, a)) * std::sqrt(dot(b, b)));
}

/// All query x doc similarities first, then row maxima, then their sum.
inline double maxsim(const Matrix& q, const Matrix& d, bool use_cosine) {
  Matrix sims(q.size(), std::vector<double>(d.size()));
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      sims[i][j] = use_cosine ? cosine(q[i], d[j]) : dot(q[i], d[j]);
    }
  }
  double total = 0.0;
  for (const auto& row : sims) total += *std::max_element(row.begin(), row.end());
  return total;
}

inline std::vector<double> normalize(std::vector<double> v) {
  const double n = std::sqrt(dot(v, v));
  for (double& x : v) x /= n;
  return v;
}

inline std::vector<double> column_mean_normalized(const Matrix& m) {
  std::vector<double> sum(m.front().size(), 0.0);
  for (const auto& row : m) {
    for (std::size_t j = 0; j < row.size(); ++j) sum[j] += row[j];
  }
  for (double& x : sum) x /= static_cast<double>(m.size());
  return normalize(sum);
}

/// Naive (rows x k) * (k x cols).
inline Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.size(), std::vector<double>(b.front().size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.front().size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// Exponential-gain DCG written out term by term.
inline double dcg(const std::vector<int>& grades, std::size_t k) {
  double total = 0.0;
  for (std::size_t rank = 1; rank <= grades.size() && rank <= k; ++rank) {
    const double gain = std::pow(2.0, grades[rank - 1]) - 1.0;
    total += gain / (std::log(static_cast<double>(rank) + 1.0) / std::log(2.0));
  }
  return total;
}

inline double ndcg(const std::vector<int>& ranked_grades, std::vector<int> all_grades,
                   std::size_t k) {
  std::sort(all_grades.begin(), all_grades.end(), std::greater<>());
  const double ideal = dcg(all_grades, k);
  return ideal == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                      : dcg(ranked_grades, k) / ideal;
}

/// Value of an IEEE binary16 bit pattern, from the format definition.
inline double half_value(std::uint16_t h) {
  const int sign = (h >> 15) & 1;
  const int exp = (h >> 10) & 0x1f;
  const int frac = h & 0x3ff;
  double v;
  if (exp == 0) {
    v = std::pow(2.0, -14) * (frac / 1024.0);
  } else if (exp == 31) {
    v = frac == 0 ? std::numeric_limits<double>::infinity()
                  : std::numeric_limits<double>::quiet_NaN();
  } else {
    v = std::pow(2.0, exp - 15) * (1.0 + frac / 1024.0);
  }
  return sign ? -v : v;
}

/// Nearest finite binary16 by exhaustive search, ties to the even pattern.
inline std::uint16_t nearest_half(double x) {
  std::uint16_t best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::uint32_t h = 0; h < 0x10000; ++h) {
    const auto bits = static_cast<std::uint16_t>(h);
    const double v = half_value(bits);
    if (!std::isfinite(v)) continue;
    if (std::signbit(v) != std::signbit(x)) continue;
    const double err = std::fabs(v - x);
    if (err < best_err || (err == best_err && (bits & 1) == 0 && (best & 1) == 1)) {
      best = bits;
      best_err = err;
    }
  }
  return best;
}

/// Random matrix with rows drawn uniformly from [-1, 1]^dim.
inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t dim,
                            bool unit_rows) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(rows, std::vector<double>(dim));
  for (auto& row : m) {
    for (double& x : row) x = u(rng);
    if (unit_rows) row = normalize(row);
  }
  return m;
}

inline std::vector<double> flatten(const Matrix& m) {
  std::vector<double> out;
  for (const auto& r : m) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace latebench::oracle
