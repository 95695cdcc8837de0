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

#include "latebench/scoring.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "latebench/error.hpp"

namespace latebench {
namespace {

double dot(const double* a, const double* b, std::size_t n) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> row_norms(std::span<const double> m, std::size_t dim) {
  std::vector<double> norms(m.size() / dim);
  for (std::size_t i = 0; i < norms.size(); ++i) {
    norms[i] = std::sqrt(dot(m.data() + i * dim, m.data() + i * dim, dim));
    if (!(norms[i] > 0.0)) {
      throw InvalidArgument("cosine similarity of a zero-norm token");
    }
  }
  return norms;
}

}  // namespace

double similarity(std::span<const double> a, std::span<const double> b,
                  SimilarityKind kind) {
  if (a.size() != b.size()) {
    throw InvalidArgument("similarity: dimension mismatch (" +
                          std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
  const double d = dot(a.data(), b.data(), a.size());
  if (kind == SimilarityKind::kDot) return d;
  const double na = std::sqrt(dot(a.data(), a.data(), a.size()));
  const double nb = std::sqrt(dot(b.data(), b.data(), b.size()));
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw InvalidArgument("similarity: cosine of a zero-norm vector");
  }
  return d / (na * nb);
}

double maxsim_score(std::span<const double> query, std::span<const double> doc,
                    std::size_t dim, SimilarityKind kind) {
  if (dim == 0 || query.size() % dim != 0 || doc.size() % dim != 0 ||
      query.empty() || doc.empty()) {
    throw InvalidArgument("maxsim_score: buffers are not whole rows of dim " +
                          std::to_string(dim));
  }
  const std::size_t qrows = query.size() / dim;
  const std::size_t drows = doc.size() / dim;

  std::vector<double> qn, dn;
  if (kind == SimilarityKind::kCosine) {
    qn = row_norms(query, dim);
    dn = row_norms(doc, dim);
  }

  double total = 0.0;
  for (std::size_t i = 0; i < qrows; ++i) {
    const double* q = query.data() + i * dim;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < drows; ++j) {
      double s = dot(q, doc.data() + j * dim, dim);
      if (kind == SimilarityKind::kCosine) s /= qn[i] * dn[j];
      if (s > best) best = s;
    }
    total += best;
  }
  return total;
}

double maxsim_score(const TokenMatrix& query, const TokenMatrix& doc,
                    SimilarityKind kind) {
  if (query.dim() != doc.dim()) {
    throw InvalidArgument("maxsim_score: dimension mismatch (query " +
                          std::to_string(query.dim()) + ", doc " +
                          std::to_string(doc.dim()) + ")");
  }
  return maxsim_score(query.values(), doc.values(), query.dim(), kind);
}

}  // namespace latebench
