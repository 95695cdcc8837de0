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

#include <random>

#include <gtest/gtest.h>

#include "latebench/compression.hpp"
#include "latebench/error.hpp"
#include "oracles.hpp"

namespace latebench {
namespace {

TEST(Project, IdentityLeavesNormalizedInputUnchanged) {
  std::mt19937_64 rng(1);
  auto rows = oracle::random_matrix(rng, 4, 6, true);
  TokenMatrix m("m", 4, 6, oracle::flatten(rows), true);
  auto p = project(m, Projection::identity(6));
  ASSERT_EQ(p.dim(), 6u);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(p.at(i, j), m.at(i, j), 1e-15);
}

TEST(Project, EightToTwoMatchesNaiveMultiply) {
  std::mt19937_64 rng(2);
  auto rows = oracle::random_matrix(rng, 3, 8, true);
  auto w = oracle::random_matrix(rng, 8, 2, false);
  TokenMatrix m("m", 3, 8, oracle::flatten(rows), true);
  auto p = project(m, Projection{8, 2, oracle::flatten(w)});
  auto expected = oracle::matmul(rows, w);
  ASSERT_EQ(p.dim(), 2u);
  EXPECT_TRUE(p.normalized());
  for (std::size_t i = 0; i < 3; ++i) {
    auto e = oracle::normalize(expected[i]);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(p.at(i, j), e[j], 1e-12);
  }
}

TEST(Project, PublishedShapeIsAccepted) {
  std::mt19937_64 rng(3);
  Projection w{3072, 512, oracle::flatten(oracle::random_matrix(rng, 3072, 512, false))};
  EXPECT_NO_THROW(w.validate());
  TokenMatrix m("m", 2, 3072, oracle::flatten(oracle::random_matrix(rng, 2, 3072, true)), true);
  auto p = project(m, w);
  EXPECT_EQ(p.dim(), 512u);
  EXPECT_EQ(p.rows(), 2u);
}

TEST(Project, ShapeErrors) {
  TokenMatrix m("m", 1, 3, {1, 0, 0}, true);
  EXPECT_THROW(project(m, Projection::identity(4)), InvalidArgument);
  EXPECT_THROW(project(m, Projection{3, 0, {}}), InvalidArgument);
  EXPECT_THROW(project(m, Projection{3, 2, {1, 2, 3}}), InvalidArgument);
  // Projects onto the zero vector.
  EXPECT_THROW(project(m, Projection{3, 1, {0, 1, 1}}), InvalidArgument);
}

TEST(BinaryQuantize, SignRule) {
  TokenMatrix pos("p", 1, 3, {0.1, 2.0, 5.0});
  auto b = binary_quantize(pos);
  EXPECT_TRUE(b.bit(0, 0) && b.bit(0, 1) && b.bit(0, 2));

  TokenMatrix mixed("x", 1, 4, {-1, 1, -0.5, 0});
  auto q = binary_quantize(mixed);
  EXPECT_FALSE(q.bit(0, 0));
  EXPECT_TRUE(q.bit(0, 1));
  EXPECT_FALSE(q.bit(0, 2));
  EXPECT_TRUE(q.bit(0, 3));
  EXPECT_EQ(q.words()[0], 0b1010u);
}

TEST(BinaryQuantize, StorageIsWordPadded) {
  TokenMatrix m("m", 3, 65, std::vector<double>(3 * 65, 1.0));
  EXPECT_EQ(binary_quantize(m).storage_bytes(), 3u * 2u * 8u);
  // The published multi-vector shape: 1802 tokens x 3072 dims.
  EXPECT_EQ(BinaryMatrix::words_per_row(3072), 48u);
  BinaryMatrix big("big", 1802, 3072, std::vector<std::uint64_t>(1802 * 48));
  EXPECT_EQ(big.storage_bytes(), 1802u * 48u * 8u);
}

TEST(BinaryQuantize, IdempotentOnSignReconstruction) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t dim = 1 + t % 130;
    TokenMatrix m("m", 3, dim, oracle::flatten(oracle::random_matrix(rng, 3, dim, false)));
    auto b = binary_quantize(m);
    std::vector<double> recon;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < dim; ++j) recon.push_back(b.bit(i, j) ? 1.0 : -1.0);
    EXPECT_EQ(binary_quantize(TokenMatrix("m", 3, dim, recon)), b);
  }
}

TEST(Hamming, Examples) {
  std::mt19937_64 rng(6);
  std::vector<std::uint64_t> a{rng(), rng()};
  EXPECT_DOUBLE_EQ(hamming_similarity(a, a, 128), 1.0);
  std::vector<std::uint64_t> comp{~a[0], ~a[1]};
  EXPECT_DOUBLE_EQ(hamming_similarity(a, comp, 128), 0.0);
  std::vector<std::uint64_t> flipped{a[0] ^ 0xffffffffULL, a[1]};
  EXPECT_DOUBLE_EQ(hamming_similarity(a, flipped, 128), 0.75);
}

TEST(Hamming, MatrixRowsAndErrors) {
  TokenMatrix x("x", 2, 4, {1, 1, 1, 1, -1, -1, 1, 1});
  TokenMatrix y("y", 1, 5, {1, 1, 1, 1, 1});
  auto bx = binary_quantize(x), by = binary_quantize(y);
  EXPECT_DOUBLE_EQ(hamming_similarity(bx, 0, bx, 1), 0.5);
  EXPECT_THROW(hamming_similarity(bx, 0, by, 0), InvalidArgument);
  EXPECT_DOUBLE_EQ(binary_maxsim_score(bx, bx), 2.0);
}

}  // namespace
}  // namespace latebench
