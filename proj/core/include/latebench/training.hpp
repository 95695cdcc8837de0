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
#include <vector>

#include "latebench/compression.hpp"
#include "latebench/embedding.hpp"

namespace latebench {

struct ContrastiveConfig {
  /// Softmax temperature. Not a published value; 0.02 is a common choice for
  /// unit-norm embeddings.
  double tau = 0.02;
  /// Hard negatives kept per query.
  std::size_t k_negatives = 2;
  /// Candidates must score strictly below this fraction of sim(q, d+).
  double percentage_threshold = 0.95;

  void validate() const;
};

/// A query, its positive document and a set of negatives, all of the same
/// representation (PooledVector or TokenMatrix) and dimension.
template <class Rep>
struct TrainingBatch {
  Rep query;
  Rep positive;
  std::vector<Rep> negatives;
};

using PooledBatch = TrainingBatch<PooledVector>;
using MultiVectorBatch = TrainingBatch<TokenMatrix>;

/// Throws InvalidArgument on mixed dims or a negative that shares the
/// positive's id.
void validate_batch(const PooledBatch& batch);
void validate_batch(const MultiVectorBatch& batch);

/// InfoNCE given precomputed similarities:
///
///   L = -log( exp(s+ / tau) / sum_{i in {+} u N} exp(s_i / tau) )
///
/// evaluated as logsumexp(s / tau) - s+ / tau with the max logit subtracted.
double info_nce_from_similarities(double positive,
                                  std::span<const double> negatives, double tau);

/// Pooled batches score with similarity(); multi-vector batches with MaxSim.
double info_nce_loss(const PooledBatch& batch, const ContrastiveConfig& cfg,
                     SimilarityKind kind = SimilarityKind::kDot);
double info_nce_loss(const MultiVectorBatch& batch, const ContrastiveConfig& cfg,
                     SimilarityKind kind = SimilarityKind::kDot);

/// Trainable linear projection applied to pooled embeddings before scoring.
/// Row-major weights with in_dim rows and out_dim columns.
struct LinearHead {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<double> weights;

  /// Entries uniform in [-sqrt(3 / in_dim), sqrt(3 / in_dim)), drawn from
  /// SplitMix64(seed) in row-major order.
  static LinearHead random(std::size_t in_dim, std::size_t out_dim,
                           std::uint64_t seed);

  void validate() const;
  Projection as_projection() const;
  /// Returns normalize(W^T x). Throws on a zero-norm projection.
  std::vector<double> apply(std::span<const double> x) const;
};

/// Loss of the full composition: project every member through the head,
/// renormalize, score, then InfoNCE.
double head_loss(const PooledBatch& batch, const LinearHead& head,
                 const ContrastiveConfig& cfg,
                 SimilarityKind kind = SimilarityKind::kDot);

struct HeadGradient {
  double loss = 0.0;
  /// d loss / d weights, same layout as LinearHead::weights.
  std::vector<double> grad;
};

/// Analytic gradient of head_loss with respect to the head weights.
///
/// With z = W^T x, u = z / |z| and s_i = u_q . u_i, the softmax residual
/// g_i = (p_i - [i = +]) / tau flows back as
///   dL/du_q = sum_i g_i u_i,   dL/du_i = g_i u_q,
///   dL/dz   = (I - u u^T) dL/du / |z|,
///   dL/dW   = sum_v x_v (dL/dz_v)^T.
/// The projected vectors are unit norm, so dot and cosine give the same
/// value and the same gradient.
HeadGradient info_nce_gradient(const PooledBatch& batch, const LinearHead& head,
                               const ContrastiveConfig& cfg,
                               SimilarityKind kind = SimilarityKind::kDot);

struct ScoredCandidate {
  std::string id;
  double similarity = 0.0;

  friend bool operator==(const ScoredCandidate&, const ScoredCandidate&) = default;
};

/// Top-K with percentage-to-positive threshold: keeps candidates whose
/// similarity is strictly below percentage_threshold * positive_similarity,
/// then returns the k_negatives highest, sorted by descending similarity with
/// ties broken by ascending id.
std::vector<ScoredCandidate> select_hard_negatives(
    double positive_similarity, std::vector<ScoredCandidate> candidates,
    const ContrastiveConfig& cfg);

/// Scores candidates against the query and applies select_hard_negatives.
/// Throws InvalidArgument if a candidate carries the positive's id.
std::vector<ScoredCandidate> mine_hard_negatives(
    const PooledVector& query, const PooledVector& positive,
    std::span<const PooledVector> candidates, const ContrastiveConfig& cfg,
    SimilarityKind kind = SimilarityKind::kDot);
std::vector<ScoredCandidate> mine_hard_negatives(
    const TokenMatrix& query, const TokenMatrix& positive,
    std::span<const TokenMatrix> candidates, const ContrastiveConfig& cfg,
    SimilarityKind kind = SimilarityKind::kDot);

}  // namespace latebench
