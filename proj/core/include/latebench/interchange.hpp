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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "latebench/embedding.hpp"

namespace latebench {

/// One line of the embedding interchange format (JSON Lines):
///
///   {"id": "doc1", "tokens": [[...], [...]]}   multi-vector record
///   {"id": "doc1", "vector": [...]}            pooled record
using EmbeddingRecord = std::variant<TokenMatrix, PooledVector>;

const std::string& record_id(const EmbeddingRecord& r);
std::size_t record_dim(const EmbeddingRecord& r);
std::size_t record_rows(const EmbeddingRecord& r);

/// Parses a single record. Token rows whose norms are already within
/// kUnitNormTolerance of 1 are kept bit-for-bit; otherwise every row is
/// renormalized. Pooled vectors are normalized on construction.
EmbeddingRecord parse_embedding_record(std::string_view line);

std::string format_embedding_record(const TokenMatrix& m);
std::string format_embedding_record(const PooledVector& v);
std::string format_embedding_record(const EmbeddingRecord& r);

/// Reads every non-blank line. Errors carry the 1-based line number.
std::vector<EmbeddingRecord> read_embeddings(std::istream& in);
std::vector<EmbeddingRecord> read_embeddings_file(
    const std::filesystem::path& path);

void write_embeddings(std::ostream& out,
                      const std::vector<EmbeddingRecord>& records);
void write_embeddings_file(const std::filesystem::path& path,
                           const std::vector<EmbeddingRecord>& records);

}  // namespace latebench
