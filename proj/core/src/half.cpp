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

#include "latebench/half.hpp"

#include <cmath>

namespace latebench {
namespace {

// Ties-to-even regardless of the ambient rounding mode.
double round_half_even(double x) noexcept {
  const double r = std::floor(x);
  const double diff = x - r;
  if (diff > 0.5) return r + 1.0;
  if (diff < 0.5) return r;
  return std::fmod(r, 2.0) == 0.0 ? r : r + 1.0;
}

}  // namespace

std::uint16_t double_to_half(double value) noexcept {
  const std::uint16_t sign = std::signbit(value) ? 0x8000 : 0x0000;
  if (std::isnan(value)) return 0x7e00;
  const double a = std::fabs(value);
  if (std::isinf(a)) return sign | 0x7c00;
  if (a == 0.0) return sign;

  // Subnormal range: unit in the last place is 2^-24.
  if (a < 0x1.0p-14) {
    const double m = round_half_even(std::ldexp(a, 24));
    // m == 1024 rolls over into the smallest normal, which has the same bits.
    return sign | static_cast<std::uint16_t>(m);
  }

  int exp2 = 0;
  std::frexp(a, &exp2);  // a = f * 2^exp2, f in [0.5, 1)
  int e = exp2 - 1;      // a = g * 2^e, g in [1, 2)
  double m = round_half_even(std::ldexp(a, 10 - e));  // in [1024, 2048]
  if (m == 2048.0) {
    m = 1024.0;
    ++e;
  }
  if (e > 15) return sign | 0x7c00;
  const auto biased = static_cast<std::uint16_t>(e + 15);
  return sign | static_cast<std::uint16_t>(biased << 10) |
         static_cast<std::uint16_t>(static_cast<int>(m) - 1024);
}

double half_to_double(std::uint16_t bits) noexcept {
  const bool neg = bits & 0x8000;
  const int exp = (bits >> 10) & 0x1f;
  const int mant = bits & 0x3ff;
  double v;
  if (exp == 0) {
    v = std::ldexp(static_cast<double>(mant), -24);
  } else if (exp == 31) {
    v = mant == 0 ? INFINITY : NAN;
  } else {
    v = std::ldexp(static_cast<double>(mant | 0x400), exp - 25);
  }
  return neg ? -v : v;
}

}  // namespace latebench
