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

#include "latebench/encoder.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "latebench/error.hpp"
#include "latebench/pooling.hpp"
#include "latebench/rng.hpp"

namespace latebench {

void EncoderConfig::validate() const {
  if (dim < 2) throw InvalidArgument("encoder dim must be >= 2");
  if (max_tokens < 1) throw InvalidArgument("encoder max_tokens must be >= 1");
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t token_seed(std::string_view token, std::uint64_t seed) noexcept {
  return mix64(fnv1a64(token) ^ mix64(seed));
}

std::vector<double> embed_token(std::string_view token,
                                const EncoderConfig& cfg) {
  SplitMix64 rng(token_seed(token, cfg.seed));
  std::vector<double> v(cfg.dim);
  double sq = 0.0;
  for (double& x : v) {
    x = rng.symmetric();
    sq += x * x;
  }
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0)) {
    throw InvalidArgument("toy encoder drew a zero vector for a token");
  }
  for (double& x : v) x /= norm;
  return v;
}

std::vector<std::string_view> tokenize(std::string_view text) {
  constexpr std::string_view ws = " \t\n\v\f\r";
  std::vector<std::string_view> out;
  std::size_t pos = text.find_first_not_of(ws);
  while (pos != std::string_view::npos) {
    const std::size_t end = text.find_first_of(ws, pos);
    out.push_back(text.substr(pos, end == std::string_view::npos
                                       ? std::string_view::npos
                                       : end - pos));
    pos = end == std::string_view::npos ? end : text.find_first_not_of(ws, end);
  }
  return out;
}

TokenMatrix encode_text(std::string_view text, const EncoderConfig& cfg,
                        std::string id) {
  cfg.validate();
  auto tokens = tokenize(text);
  if (tokens.empty()) {
    throw InvalidArgument("encode_text: no tokens in input" +
                          (id.empty() ? std::string() : " '" + id + "'"));
  }
  if (tokens.size() > cfg.max_tokens) tokens.resize(cfg.max_tokens);
  std::vector<double> values;
  values.reserve(tokens.size() * cfg.dim);
  for (auto tok : tokens) {
    auto e = embed_token(tok, cfg);
    values.insert(values.end(), e.begin(), e.end());
  }
  return TokenMatrix(std::move(id), tokens.size(), cfg.dim, std::move(values),
                     true);
}

PooledVector encode_pooled(std::string_view text, const EncoderConfig& cfg,
                           Pooling pooling, std::string id) {
  return pool(encode_text(text, cfg, std::move(id)), pooling);
}

std::vector<TextRecord> read_text_corpus(std::istream& in) {
  std::vector<TextRecord> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected 'id<TAB>text'");
    }
    TextRecord rec{line.substr(0, tab), line.substr(tab + 1)};
    if (!seen.insert(rec.id).second) {
      throw ParseError("line " + std::to_string(lineno) + ": duplicate id '" +
                       rec.id + "'");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<TextRecord> read_text_corpus_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_text_corpus(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text_corpus(std::ostream& out, std::span<const TextRecord> records) {
  for (const auto& r : records) out << r.id << '\t' << r.text << '\n';
}

}  // namespace latebench
