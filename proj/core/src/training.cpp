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

#include "latebench/training.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latebench/error.hpp"
#include "latebench/rng.hpp"
#include "latebench/scoring.hpp"

namespace latebench {

void ContrastiveConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidArgument("tau must be a positive finite number");
  }
  if (!(percentage_threshold > 0.0) || percentage_threshold > 1.0) {
    throw InvalidArgument("percentage_threshold must lie in (0, 1]");
  }
}

namespace {

template <class Rep>
void validate_batch_impl(const TrainingBatch<Rep>& batch) {
  const std::size_t dim = batch.query.dim();
  if (batch.positive.dim() != dim) {
    throw InvalidArgument("batch positive dim does not match query dim");
  }
  for (const auto& n : batch.negatives) {
    if (n.dim() != dim) {
      throw InvalidArgument("batch negative '" + n.id() +
                            "' dim does not match query dim");
    }
    if (!n.id().empty() && n.id() == batch.positive.id()) {
      throw InvalidArgument("negative set contains the positive '" + n.id() + "'");
    }
  }
}

template <class Rep, class Score>
double loss_impl(const TrainingBatch<Rep>& batch, const ContrastiveConfig& cfg,
                 Score score) {
  cfg.validate();
  validate_batch(batch);
  const double pos = score(batch.query, batch.positive);
  std::vector<double> neg;
  neg.reserve(batch.negatives.size());
  for (const auto& n : batch.negatives) neg.push_back(score(batch.query, n));
  return info_nce_from_similarities(pos, neg, cfg.tau);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Projection of one input vector, kept with its norm for backprop.
struct Projected {
  std::vector<double> unit;
  double norm = 0.0;
};

Projected project_one(const LinearHead& head, std::span<const double> x) {
  std::vector<double> z(head.out_dim, 0.0);
  for (std::size_t i = 0; i < head.in_dim; ++i) {
    const double xi = x[i];
    const double* w = head.weights.data() + i * head.out_dim;
    for (std::size_t j = 0; j < head.out_dim; ++j) z[j] += xi * w[j];
  }
  const double n = l2_norm(z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvalidArgument("linear head produced a zero-norm projection");
  }
  for (double& v : z) v /= n;
  return {std::move(z), n};
}

void check_head_input(const PooledBatch& batch, const LinearHead& head) {
  head.validate();
  if (batch.query.dim() != head.in_dim) {
    throw InvalidArgument("batch dim " + std::to_string(batch.query.dim()) +
                          " does not match head input dim " +
                          std::to_string(head.in_dim));
  }
}

}  // namespace

void validate_batch(const PooledBatch& batch) { validate_batch_impl(batch); }
void validate_batch(const MultiVectorBatch& batch) { validate_batch_impl(batch); }

double info_nce_from_similarities(double positive,
                                  std::span<const double> negatives,
                                  double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  if (negatives.empty()) return 0.0;
  const double lp = positive / tau;
  double m = lp;
  for (double s : negatives) m = std::max(m, s / tau);
  double rest = 0.0;
  for (double s : negatives) rest += std::exp(s / tau - m);
  if (m == lp) return std::log1p(rest);
  return std::log(std::exp(lp - m) + rest) - (lp - m);
}

double info_nce_loss(const PooledBatch& batch, const ContrastiveConfig& cfg,
                     SimilarityKind kind) {
  return loss_impl(batch, cfg, [kind](const PooledVector& a, const PooledVector& b) {
    return similarity(a.values(), b.values(), kind);
  });
}

double info_nce_loss(const MultiVectorBatch& batch, const ContrastiveConfig& cfg,
                     SimilarityKind kind) {
  return loss_impl(batch, cfg, [kind](const TokenMatrix& a, const TokenMatrix& b) {
    return maxsim_score(a, b, kind);
  });
}

LinearHead LinearHead::random(std::size_t in_dim, std::size_t out_dim,
                              std::uint64_t seed) {
  if (in_dim == 0 || out_dim == 0) {
    throw InvalidArgument("linear head dims must be >= 1");
  }
  LinearHead h{in_dim, out_dim, std::vector<double>(in_dim * out_dim)};
  SplitMix64 rng(seed);
  const double scale = std::sqrt(3.0 / static_cast<double>(in_dim));
  for (double& w : h.weights) w = scale * rng.symmetric();
  return h;
}

void LinearHead::validate() const {
  as_projection().validate();
  for (double w : weights) {
    if (!std::isfinite(w)) throw InvalidArgument("linear head has a non-finite weight");
  }
}

Projection LinearHead::as_projection() const {
  return Projection{in_dim, out_dim, weights};
}

std::vector<double> LinearHead::apply(std::span<const double> x) const {
  if (x.size() != in_dim) {
    throw InvalidArgument("linear head input dim mismatch");
  }
  return project_one(*this, x).unit;
}

double head_loss(const PooledBatch& batch, const LinearHead& head,
                 const ContrastiveConfig& cfg, SimilarityKind kind) {
  cfg.validate();
  validate_batch(batch);
  check_head_input(batch, head);
  const auto q = head.apply(batch.query.values());
  const double pos = similarity(q, head.apply(batch.positive.values()), kind);
  std::vector<double> neg;
  neg.reserve(batch.negatives.size());
  for (const auto& n : batch.negatives) {
    neg.push_back(similarity(q, head.apply(n.values()), kind));
  }
  return info_nce_from_similarities(pos, neg, cfg.tau);
}

HeadGradient info_nce_gradient(const PooledBatch& batch, const LinearHead& head,
                               const ContrastiveConfig& cfg,
                               SimilarityKind kind) {
  cfg.validate();
  validate_batch(batch);
  check_head_input(batch, head);
  (void)kind;  // unit-norm projections: dot and cosine coincide

  // Member 0 is the positive, then the negatives.
  std::vector<std::span<const double>> inputs;
  inputs.push_back(batch.positive.values());
  for (const auto& n : batch.negatives) inputs.push_back(n.values());

  const Projected q = project_one(head, batch.query.values());
  std::vector<Projected> docs;
  std::vector<double> sims;
  for (auto x : inputs) {
    docs.push_back(project_one(head, x));
    sims.push_back(dot(q.unit, docs.back().unit));
  }

  HeadGradient out;
  out.loss = info_nce_from_similarities(
      sims[0], std::span<const double>(sims).subspan(1), cfg.tau);
  out.grad.assign(head.weights.size(), 0.0);
  if (sims.size() == 1) return out;

  // Softmax over logits s_i / tau.
  double m = sims[0];
  for (double s : sims) m = std::max(m, s);
  std::vector<double> p(sims.size());
  double z = 0.0;
  for (std::size_t i = 0; i < sims.size(); ++i) {
    p[i] = std::exp((sims[i] - m) / cfg.tau);
    z += p[i];
  }
  std::vector<double> g(sims.size());
  for (std::size_t i = 0; i < sims.size(); ++i) {
    g[i] = (p[i] / z - (i == 0 ? 1.0 : 0.0)) / cfg.tau;
  }

  const std::size_t out_dim = head.out_dim;
  // dL/dz = (du - u (u . du)) / |z|, then accumulate x (dL/dz)^T.
  auto backprop = [&](std::span<const double> x, const Projected& pr,
                      const std::vector<double>& du) {
    const double proj = dot(pr.unit, du);
    std::vector<double> dz(out_dim);
    for (std::size_t j = 0; j < out_dim; ++j) {
      dz[j] = (du[j] - pr.unit[j] * proj) / pr.norm;
    }
    for (std::size_t a = 0; a < head.in_dim; ++a) {
      const double xa = x[a];
      double* row = out.grad.data() + a * out_dim;
      for (std::size_t j = 0; j < out_dim; ++j) row[j] += xa * dz[j];
    }
  };

  std::vector<double> du_q(out_dim, 0.0);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (std::size_t j = 0; j < out_dim; ++j) du_q[j] += g[i] * docs[i].unit[j];
    std::vector<double> du_i(out_dim);
    for (std::size_t j = 0; j < out_dim; ++j) du_i[j] = g[i] * q.unit[j];
    backprop(inputs[i], docs[i], du_i);
  }
  backprop(batch.query.values(), q, du_q);
  return out;
}

std::vector<ScoredCandidate> select_hard_negatives(
    double positive_similarity, std::vector<ScoredCandidate> candidates,
    const ContrastiveConfig& cfg) {
  cfg.validate();
  const double threshold = cfg.percentage_threshold * positive_similarity;
  std::erase_if(candidates, [threshold](const ScoredCandidate& c) {
    return !(c.similarity < threshold);
  });
  std::sort(candidates.begin(), candidates.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.similarity != b.similarity) return a.similarity > b.similarity;
              return a.id < b.id;
            });
  if (candidates.size() > cfg.k_negatives) candidates.resize(cfg.k_negatives);
  return candidates;
}

namespace {

template <class Rep, class Score>
std::vector<ScoredCandidate> mine_impl(const Rep& query, const Rep& positive,
                                       std::span<const Rep> candidates,
                                       const ContrastiveConfig& cfg,
                                       Score score) {
  cfg.validate();
  std::vector<ScoredCandidate> scored;
  scored.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (c.id() == positive.id()) {
      throw InvalidArgument("mining candidates include the positive '" +
                            c.id() + "'");
    }
    scored.push_back({c.id(), score(query, c)});
  }
  return select_hard_negatives(score(query, positive), std::move(scored), cfg);
}

}  // namespace

std::vector<ScoredCandidate> mine_hard_negatives(
    const PooledVector& query, const PooledVector& positive,
    std::span<const PooledVector> candidates, const ContrastiveConfig& cfg,
    SimilarityKind kind) {
  return mine_impl(query, positive, candidates, cfg,
                   [kind](const PooledVector& a, const PooledVector& b) {
                     return similarity(a.values(), b.values(), kind);
                   });
}

std::vector<ScoredCandidate> mine_hard_negatives(
    const TokenMatrix& query, const TokenMatrix& positive,
    std::span<const TokenMatrix> candidates, const ContrastiveConfig& cfg,
    SimilarityKind kind) {
  return mine_impl(query, positive, candidates, cfg,
                   [kind](const TokenMatrix& a, const TokenMatrix& b) {
                     return maxsim_score(a, b, kind);
                   });
}

}  // namespace latebench
