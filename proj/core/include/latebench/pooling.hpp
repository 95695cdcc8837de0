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

#include "latebench/embedding.hpp"

namespace latebench {

/// Column-wise mean of all rows, then L2-normalized. Throws on a zero mean.
PooledVector mean_pool(const TokenMatrix& m);

/// Last row, L2-normalized. Throws if the last row is all zeros.
PooledVector last_token_pool(const TokenMatrix& m);

PooledVector pool(const TokenMatrix& m, Pooling pooling);

/// Token reduction: consecutive groups of `factor` rows are replaced by their
/// normalized mean. A trailing partial group is pooled the same way, so the
/// result has ceil(rows / factor) rows. Row order is preserved.
TokenMatrix late_pool(const TokenMatrix& m, std::size_t factor);

}  // namespace latebench
