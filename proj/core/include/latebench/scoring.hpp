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

#include <span>

#include "latebench/embedding.hpp"

namespace latebench {

/// Dot product or cosine similarity. Symmetric in its arguments.
///
/// Throws InvalidArgument on a dimension mismatch, or on a zero-norm operand
/// when kind is kCosine.
double similarity(std::span<const double> a, std::span<const double> b,
                  SimilarityKind kind = SimilarityKind::kDot);

/// Late-interaction relevance: for every query token take the best-matching
/// document token, then sum over query tokens.
///
///   score(Q, D) = sum_i max_j sim(q_i, d_j)
///
/// With kDot the operands should be row-normalized so that the score equals
/// the cosine variant. Only a dimension mismatch is rejected.
double maxsim_score(const TokenMatrix& query, const TokenMatrix& doc,
                    SimilarityKind kind = SimilarityKind::kDot);

/// Same kernel over raw row-major buffers; `dim` is shared by both operands.
double maxsim_score(std::span<const double> query, std::span<const double> doc,
                    std::size_t dim, SimilarityKind kind = SimilarityKind::kDot);

}  // namespace latebench
