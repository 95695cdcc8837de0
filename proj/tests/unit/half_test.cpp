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

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "latebench/half.hpp"
#include "oracles.hpp"

namespace latebench {
namespace {

TEST(Half, Examples) {
  EXPECT_EQ(double_to_half(0.0), 0x0000);
  EXPECT_EQ(double_to_half(-0.0), 0x8000);
  EXPECT_EQ(double_to_half(1.0), 0x3c00);
  EXPECT_EQ(double_to_half(-2.0), 0xc000);
  EXPECT_EQ(double_to_half(65504.0), 0x7bff);
  EXPECT_EQ(double_to_half(1e6), 0x7c00);
  EXPECT_EQ(double_to_half(-1e6), 0xfc00);
  EXPECT_EQ(double_to_half(std::ldexp(1.0, -24)), 0x0001);
  EXPECT_EQ(double_to_half(std::ldexp(1.0, -26)), 0x0000);
  EXPECT_TRUE(std::isnan(half_to_double(double_to_half(std::nan("")))));
  EXPECT_NEAR(half_to_double(double_to_half(0.1)), 0.1, std::ldexp(1.0, -10));
}

TEST(Half, TiesRoundToEven) {
  // 1 + 2^-11 sits halfway between 1 and 1 + 2^-10.
  EXPECT_EQ(double_to_half(1.0 + std::ldexp(1.0, -11)), 0x3c00);
  EXPECT_EQ(double_to_half(1.0 + 3 * std::ldexp(1.0, -11)), 0x3c02);
  // Halfway between 65504 and the overflow threshold goes to infinity.
  EXPECT_EQ(double_to_half(65520.0), 0x7c00);
  EXPECT_EQ(double_to_half(65519.99), 0x7bff);
}

TEST(HalfProperty, EveryFiniteHalfRoundTrips) {
  for (std::uint32_t h = 0; h < 0x10000; ++h) {
    const auto bits = static_cast<std::uint16_t>(h);
    const double v = half_to_double(bits);
    if (std::isnan(v)) {
      EXPECT_TRUE(std::isnan(oracle::half_value(bits)));
      continue;
    }
    EXPECT_EQ(v, oracle::half_value(bits));
    if (std::isfinite(v)) {
      EXPECT_EQ(double_to_half(v), bits);
    }
  }
}

TEST(HalfProperty, MatchesExhaustiveNearestSearch) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> mag(-26.0, 15.99);
  for (int t = 0; t < 300; ++t) {
    double x = std::exp2(mag(rng));
    if (t % 2) x = -x;
    EXPECT_EQ(double_to_half(x), oracle::nearest_half(x)) << x;
  }
}

}  // namespace
}  // namespace latebench
