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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latebench/embedding.hpp"

namespace latebench {

/// Deterministic hashing encoder standing in for a neural backbone. Every
/// distinct whitespace-separated token maps to a fixed random unit vector.
/// The exact algorithm is documented in docs/toy_encoder.md.
struct EncoderConfig {
  std::size_t dim = 32;
  std::uint64_t seed = 0;
  std::size_t max_tokens = 512;

  void validate() const;
};

/// 64-bit FNV-1a over the token bytes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Seed of the per-token generator: mix64(fnv1a64(token) ^ mix64(seed)).
std::uint64_t token_seed(std::string_view token, std::uint64_t seed) noexcept;

/// Unit-norm embedding of one token.
std::vector<double> embed_token(std::string_view token,
                                const EncoderConfig& cfg);

/// Splits on ASCII whitespace (space, \t, \n, \v, \f, \r).
std::vector<std::string_view> tokenize(std::string_view text);

/// One row per token, truncated to cfg.max_tokens. Throws InvalidArgument if
/// the text holds no tokens.
TokenMatrix encode_text(std::string_view text, const EncoderConfig& cfg,
                        std::string id = {});

PooledVector encode_pooled(std::string_view text, const EncoderConfig& cfg,
                           Pooling pooling, std::string id = {});

/// A line of a plain-text corpus: `id<TAB>text`.
struct TextRecord {
  std::string id;
  std::string text;
};

std::vector<TextRecord> read_text_corpus(std::istream& in);
std::vector<TextRecord> read_text_corpus_file(const std::filesystem::path& path);
void write_text_corpus(std::ostream& out, std::span<const TextRecord> records);

}  // namespace latebench
