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

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "latebench/error.hpp"
#include "latebench/scoring.hpp"
#include "latebench/training.hpp"
#include "oracles.hpp"

namespace latebench {
namespace {

PooledVector pv(std::string id, std::vector<double> v) {
  return PooledVector(std::move(id), v, Pooling::kMean);
}

PooledBatch random_batch(std::mt19937_64& rng, std::size_t dim, std::size_t negatives) {
  auto m = oracle::random_matrix(rng, 2 + negatives, dim, true);
  PooledBatch b{pv("q", m[0]), pv("pos", m[1]), {}};
  for (std::size_t i = 0; i < negatives; ++i) b.negatives.push_back(pv("n" + std::to_string(i), m[2 + i]));
  return b;
}

// Reference InfoNCE straight from the definition.
double naive_info_nce(double pos, const std::vector<double>& negs, double tau) {
  double denom = std::exp(pos / tau);
  for (double s : negs) denom += std::exp(s / tau);
  return -std::log(std::exp(pos / tau) / denom);
}

TEST(InfoNce, UniformSimilarities) {
  for (std::size_t n = 0; n <= 10; ++n) {
    std::vector<double> negs(n, 0.3);
    EXPECT_NEAR(info_nce_from_similarities(0.3, negs, 0.02), std::log1p(static_cast<double>(n)),
                1e-12);
  }
}

TEST(InfoNce, ScalarExample) {
  const std::vector<double> negs{0.0};
  EXPECT_NEAR(info_nce_from_similarities(1.0, negs, 1.0), -std::log(std::exp(1.0) / (std::exp(1.0) + 1.0)),
              1e-15);
  EXPECT_NEAR(info_nce_from_similarities(1.0, negs, 1.0), 0.31326, 1e-5);
}

TEST(InfoNce, EmptyNegativesGiveZero) {
  EXPECT_EQ(info_nce_from_similarities(0.7, {}, 0.02), 0.0);
  std::mt19937_64 rng(1);
  auto b = random_batch(rng, 8, 0);
  EXPECT_EQ(info_nce_loss(b, ContrastiveConfig{}), 0.0);
}

TEST(InfoNce, StableForExtremeLogits) {
  const std::vector<double> negs{1.0, -1.0};
  const double l = info_nce_from_similarities(-1.0, negs, 1e-3);
  EXPECT_TRUE(std::isfinite(l));
  EXPECT_NEAR(l, 2000.0, 1e-9);
  EXPECT_THROW(info_nce_from_similarities(1.0, negs, 0.0), InvalidArgument);
}

TEST(InfoNceProperty, MatchesDefinitionAndIsNonNegative) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> sim(-1.0, 1.0), tau(0.05, 1.0);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> negs(1 + t % 6);
    for (double& s : negs) s = sim(rng);
    const double p = sim(rng), T = tau(rng);
    const double l = info_nce_from_similarities(p, negs, T);
    EXPECT_GT(l, 0.0);
    EXPECT_NEAR(l, naive_info_nce(p, negs, T), 1e-10 * std::max(1.0, l));
  }
}

TEST(InfoNceProperty, AddingANegativeNeverLowersLoss) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> sim(-1.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> negs(t % 5);
    for (double& s : negs) s = sim(rng);
    const double before = info_nce_from_similarities(0.4, negs, 0.1);
    negs.push_back(sim(rng));
    EXPECT_GE(info_nce_from_similarities(0.4, negs, 0.1), before);
  }
}

TEST(InfoNceProperty, TemperatureScaling) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> sim(-1.0, 1.0), c(0.1, 10.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> negs(3), scaled(3);
    for (double& s : negs) s = sim(rng);
    const double p = sim(rng), k = c(rng);
    for (std::size_t i = 0; i < 3; ++i) scaled[i] = k * negs[i];
    EXPECT_NEAR(info_nce_from_similarities(p, negs, 0.05),
                info_nce_from_similarities(k * p, scaled, k * 0.05), 1e-9);
  }
}

TEST(InfoNce, BatchLossUsesSimilarityAndMaxSim) {
  std::mt19937_64 rng(5);
  auto b = random_batch(rng, 6, 3);
  ContrastiveConfig cfg{0.1, 2, 0.95};
  std::vector<double> negs;
  for (const auto& n : b.negatives) negs.push_back(similarity(b.query.values(), n.values()));
  EXPECT_NEAR(info_nce_loss(b, cfg),
              naive_info_nce(similarity(b.query.values(), b.positive.values()), negs, 0.1), 1e-12);

  auto mk = [&](std::string id) {
    return TokenMatrix(std::move(id), 3, 6, oracle::flatten(oracle::random_matrix(rng, 3, 6, true)), true);
  };
  MultiVectorBatch mb{mk("q"), mk("p"), {mk("a"), mk("b")}};
  std::vector<double> mnegs{maxsim_score(mb.query, mb.negatives[0]), maxsim_score(mb.query, mb.negatives[1])};
  EXPECT_NEAR(info_nce_loss(mb, cfg), naive_info_nce(maxsim_score(mb.query, mb.positive), mnegs, 0.1),
              1e-12);
}

TEST(InfoNce, BatchValidation) {
  std::mt19937_64 rng(6);
  auto b = random_batch(rng, 4, 1);
  b.negatives.push_back(pv("pos", {1, 0, 0, 0}));
  EXPECT_THROW(info_nce_loss(b, ContrastiveConfig{}), InvalidArgument);
  auto c = random_batch(rng, 4, 1);
  c.negatives.push_back(pv("x", {1, 0, 0}));
  EXPECT_THROW(info_nce_loss(c, ContrastiveConfig{}), InvalidArgument);
}

// Central differences on every weight; relative error is measured against the
// larger of the two values, with an absolute floor tied to the gradient scale.
double max_relative_error(const PooledBatch& b, const LinearHead& head, const ContrastiveConfig& cfg) {
  const auto g = info_nce_gradient(b, head, cfg);
  EXPECT_NEAR(g.loss, head_loss(b, head, cfg), 1e-12 * std::max(1.0, g.loss));
  double scale = 0.0;
  for (double x : g.grad) scale = std::max(scale, std::abs(x));
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t k = 0; k < head.weights.size(); ++k) {
    LinearHead plus = head, minus = head;
    plus.weights[k] += h;
    minus.weights[k] -= h;
    const double fd = (head_loss(b, plus, cfg) - head_loss(b, minus, cfg)) / (2 * h);
    const double denom = std::max({std::abs(fd), std::abs(g.grad[k]), 1e-3 * scale, 1e-8});
    worst = std::max(worst, std::abs(fd - g.grad[k]) / denom);
  }
  return worst;
}

TEST(InfoNceGradient, EightByFourMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  auto b = random_batch(rng, 8, 3);
  auto head = LinearHead::random(8, 4, 11);
  EXPECT_LT(max_relative_error(b, head, ContrastiveConfig{0.1, 2, 0.95}), 1e-5);
}

TEST(InfoNceGradientProperty, FiniteDifferencesOverRandomConfigurations) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> tau(0.05, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 120; ++t) {
    const std::size_t in = 2 + t % 9, out = 1 + t % 5 + 1;
    auto b = random_batch(rng, in, t % 4);
    auto head = LinearHead::random(in, out, rng());
    worst = std::max(worst, max_relative_error(b, head, ContrastiveConfig{tau(rng), 2, 0.95}));
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(InfoNceGradient, SaturatedSoftmaxHasVanishingGradient) {
  // Head keeps the first four coordinates; the positive equals the query and
  // the negative is orthogonal, so the logit gap is 1 / tau = 50 tau-units.
  LinearHead head{8, 4, std::vector<double>(32, 0.0)};
  for (std::size_t i = 0; i < 4; ++i) head.weights[i * 4 + i] = 1.0;
  PooledBatch b{pv("q", {1, 0, 0, 0, 0, 0, 0, 0}), pv("p", {1, 0, 0, 0, 0, 0, 0, 0}),
                {pv("n", {0, 1, 0, 0, 0, 0, 0, 0})}};
  auto g = info_nce_gradient(b, head, ContrastiveConfig{0.02, 2, 0.95});
  EXPECT_LT(l2_norm(g.grad), 1e-6);
}

TEST(InfoNceGradient, ZeroProjectionIsAnError) {
  LinearHead head{2, 1, {0.0, 1.0}};
  PooledBatch b{pv("q", {1, 0}), pv("p", {0, 1}), {}};
  EXPECT_THROW(info_nce_gradient(b, head, ContrastiveConfig{}), InvalidArgument);
}

TEST(Mining, Examples) {
  ContrastiveConfig cfg;  // threshold 0.95, K = 2
  std::vector<ScoredCandidate> c{{"a", 0.96}, {"b", 0.94}, {"c", 0.90}, {"d", 0.50}};
  auto got = select_hard_negatives(1.0, c, cfg);
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].id, "b");
  EXPECT_EQ(got[1].id, "c");

  EXPECT_TRUE(select_hard_negatives(1.0, {{"a", 0.96}, {"b", 0.99}}, cfg).empty());
  EXPECT_TRUE(select_hard_negatives(1.0, c, ContrastiveConfig{0.02, 0, 0.95}).empty());
  EXPECT_TRUE(select_hard_negatives(1.0, {}, cfg).empty());
  // Exactly at the threshold is excluded.
  EXPECT_TRUE(select_hard_negatives(1.0, {{"a", 0.95}}, cfg).empty());
}

TEST(Mining, TiesBreakByAscendingId) {
  auto got = select_hard_negatives(1.0, {{"z", 0.5}, {"b", 0.5}, {"m", 0.5}}, ContrastiveConfig{});
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].id, "b");
  EXPECT_EQ(got[1].id, "m");
}

TEST(Mining, ScoresWithSimilarityOrMaxSim) {
  ContrastiveConfig cfg{0.02, 1, 0.95};
  auto q = pv("q", {1, 0, 0}), pos = pv("p", {1, 0, 0});
  std::vector<PooledVector> cand{pv("a", {0.6, 0.8, 0}), pv("b", {0.8, 0.6, 0}), pv("c", {0, 0, 1})};
  auto got = mine_hard_negatives(q, pos, std::span<const PooledVector>(cand), cfg);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].id, "b");
  EXPECT_NEAR(got[0].similarity, 0.8, 1e-15);

  cand.push_back(pv("p", {0, 1, 0}));
  EXPECT_THROW(mine_hard_negatives(q, pos, std::span<const PooledVector>(cand), cfg), InvalidArgument);

  TokenMatrix tq("q", 2, 2, {1, 0, 0, 1}, true), tp("p", 2, 2, {1, 0, 0, 1}, true);
  std::vector<TokenMatrix> tc{TokenMatrix("a", 1, 2, {1, 0}, true)};
  auto mv = mine_hard_negatives(tq, tp, std::span<const TokenMatrix>(tc), cfg);
  ASSERT_EQ(mv.size(), 1u);
  EXPECT_DOUBLE_EQ(mv[0].similarity, 1.0);  // maxsim: 1 + 0
}

TEST(MiningProperty, SafetyOverRandomCandidates) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> sim(-1.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    ContrastiveConfig cfg{0.02, static_cast<std::size_t>(t % 5), 0.5 + 0.5 * (t % 7) / 6.0};
    const double pos = sim(rng);
    std::vector<ScoredCandidate> c;
    for (int i = 0; i < t % 12; ++i) c.push_back({"c" + std::to_string(i), sim(rng)});
    auto got = select_hard_negatives(pos, c, cfg);
    EXPECT_LE(got.size(), cfg.k_negatives);
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_LT(got[i].similarity, cfg.percentage_threshold * pos);
      if (i > 0) EXPECT_GE(got[i - 1].similarity, got[i].similarity);
    }
  }
}

TEST(MiningProperty, PositiveScalingKeepsSelection) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> sim(0.0, 1.0), c(0.5, 4.0);
  for (int t = 0; t < 500; ++t) {
    const double pos = sim(rng), k = c(rng);
    std::vector<ScoredCandidate> a, b;
    for (int i = 0; i < 8; ++i) {
      const double s = sim(rng);
      a.push_back({"c" + std::to_string(i), s});
      b.push_back({"c" + std::to_string(i), s * k});
    }
    auto ga = select_hard_negatives(pos, a, ContrastiveConfig{});
    auto gb = select_hard_negatives(pos * k, b, ContrastiveConfig{});
    ASSERT_EQ(ga.size(), gb.size());
    for (std::size_t i = 0; i < ga.size(); ++i) EXPECT_EQ(ga[i].id, gb[i].id);
  }
}

TEST(LinearHead, RandomInitIsBoundedAndDeterministic) {
  auto a = LinearHead::random(16, 8, 3), b = LinearHead::random(16, 8, 3);
  EXPECT_EQ(a.weights, b.weights);
  const double bound = std::sqrt(3.0 / 16.0);
  for (double w : a.weights) {
    EXPECT_GE(w, -bound);
    EXPECT_LT(w, bound);
  }
  EXPECT_THROW(LinearHead::random(0, 4, 1), InvalidArgument);
}

TEST(ContrastiveConfig, Validation) {
  EXPECT_THROW((ContrastiveConfig{0.0, 2, 0.95}.validate()), InvalidArgument);
  EXPECT_THROW((ContrastiveConfig{0.1, 2, 0.0}.validate()), InvalidArgument);
  EXPECT_THROW((ContrastiveConfig{0.1, 2, 1.5}.validate()), InvalidArgument);
  EXPECT_NO_THROW(ContrastiveConfig{}.validate());
}

}  // namespace
}  // namespace latebench
