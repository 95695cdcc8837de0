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

#include <cstdint>

namespace latebench {

/// IEEE 754 binary16 encoding of `value`, round-to-nearest-even.
/// Overflow saturates to +-inf; NaN maps to a quiet NaN.
std::uint16_t double_to_half(double value) noexcept;

/// Exact binary16 -> double widening.
double half_to_double(std::uint16_t bits) noexcept;

}  // namespace latebench
