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

#include "latebench/index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <unordered_set>

#include "latebench/compression.hpp"
#include "latebench/error.hpp"
#include "latebench/half.hpp"
#include "latebench/scoring.hpp"
#include "little_endian.hpp"

namespace latebench {

std::string_view to_string(IndexMode mode) {
  switch (mode) {
    case IndexMode::kMultiVector: return "multi_vector";
    case IndexMode::kPooled: return "pooled";
    case IndexMode::kBinary: return "binary";
  }
  return "unknown";
}

std::string_view to_string(Precision precision) {
  switch (precision) {
    case Precision::kFp32: return "fp32";
    case Precision::kFp16: return "fp16";
    case Precision::kInt8: return "int8";
    case Precision::kBit1: return "bit1";
  }
  return "unknown";
}

IndexMode parse_index_mode(std::string_view name) {
  if (name == "multi_vector" || name == "multi") return IndexMode::kMultiVector;
  if (name == "pooled") return IndexMode::kPooled;
  if (name == "binary") return IndexMode::kBinary;
  throw InvalidArgument("unknown index mode '" + std::string(name) +
                        "' (expected multi_vector|pooled|binary)");
}

Precision parse_precision(std::string_view name) {
  if (name == "fp32") return Precision::kFp32;
  if (name == "fp16") return Precision::kFp16;
  if (name == "int8") return Precision::kInt8;
  if (name == "bit1") return Precision::kBit1;
  throw InvalidArgument("unknown precision '" + std::string(name) +
                        "' (expected fp32|fp16|int8|bit1)");
}

unsigned bits_per_element(Precision precision) noexcept {
  switch (precision) {
    case Precision::kFp32: return 32;
    case Precision::kFp16: return 16;
    case Precision::kInt8: return 8;
    case Precision::kBit1: return 1;
  }
  return 0;
}

void validate_mode_precision(IndexMode mode, Precision precision) {
  const bool binary_mode = mode == IndexMode::kBinary;
  const bool bit1 = precision == Precision::kBit1;
  if (binary_mode != bit1) {
    throw InvalidArgument("precision " + std::string(to_string(precision)) +
                          " is not supported in " +
                          std::string(to_string(mode)) +
                          " mode (bit1 pairs with binary mode only)");
  }
}

std::size_t payload_bytes(Precision precision, std::size_t rows,
                          std::size_t dim) {
  switch (precision) {
    case Precision::kFp32: return rows * dim * 4;
    case Precision::kFp16: return rows * dim * 2;
    case Precision::kInt8: return rows * 4 + rows * dim;
    case Precision::kBit1: return rows * BinaryMatrix::words_per_row(dim) * 8;
  }
  return 0;
}

std::vector<std::byte> encode_payload(Precision precision, std::size_t rows,
                                      std::size_t dim,
                                      std::span<const double> values) {
  if (values.size() != rows * dim) {
    throw InvalidArgument("encode_payload: value count does not match shape");
  }
  std::vector<std::byte> out;
  out.reserve(payload_bytes(precision, rows, dim));
  switch (precision) {
    case Precision::kFp32:
      for (double x : values) le::put_f32(out, static_cast<float>(x));
      break;
    case Precision::kFp16:
      for (double x : values) le::put_u16(out, double_to_half(x));
      break;
    case Precision::kInt8: {
      std::vector<float> scales(rows);
      for (std::size_t r = 0; r < rows; ++r) {
        double amax = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
          amax = std::max(amax, std::fabs(values[r * dim + j]));
        }
        scales[r] = static_cast<float>(amax / 127.0);
        le::put_f32(out, scales[r]);
      }
      for (std::size_t r = 0; r < rows; ++r) {
        const double s = scales[r];
        for (std::size_t j = 0; j < dim; ++j) {
          double q = s > 0.0 ? std::nearbyint(values[r * dim + j] / s) : 0.0;
          q = std::clamp(q, -127.0, 127.0);
          out.push_back(static_cast<std::byte>(
              static_cast<std::uint8_t>(static_cast<std::int8_t>(q))));
        }
      }
      break;
    }
    case Precision::kBit1:
      for (std::size_t r = 0; r < rows; ++r) {
        for (auto w : pack_signs(values.subspan(r * dim, dim))) {
          le::put_u64(out, w);
        }
      }
      break;
  }
  return out;
}

void CorpusIndex::decode(Entry& e) const {
  const std::size_t n = e.rows * dim_;
  const std::byte* p = e.payload.data();
  e.values.clear();
  e.bits.clear();
  switch (precision_) {
    case Precision::kFp32:
      e.values.resize(n);
      for (std::size_t i = 0; i < n; ++i) e.values[i] = le::get_f32(p + 4 * i);
      break;
    case Precision::kFp16:
      e.values.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        e.values[i] = half_to_double(le::get_u16(p + 2 * i));
      }
      break;
    case Precision::kInt8: {
      e.values.resize(n);
      const std::byte* q = p + 4 * e.rows;
      for (std::size_t r = 0; r < e.rows; ++r) {
        const double s = le::get_f32(p + 4 * r);
        for (std::size_t j = 0; j < dim_; ++j) {
          const auto v = static_cast<std::int8_t>(
              std::to_integer<std::uint8_t>(q[r * dim_ + j]));
          e.values[r * dim_ + j] = static_cast<double>(v) * s;
        }
      }
      break;
    }
    case Precision::kBit1: {
      const std::size_t words = e.rows * BinaryMatrix::words_per_row(dim_);
      e.bits.resize(words);
      for (std::size_t i = 0; i < words; ++i) e.bits[i] = le::get_u64(p + 8 * i);
      break;
    }
  }
}

void CorpusIndex::add_entry(std::string id, std::size_t rows,
                            std::vector<std::byte> payload) {
  Entry e{std::move(id), rows, std::move(payload), {}, {}};
  decode(e);
  total_tokens_ += rows;
  entries_.push_back(std::move(e));
}

CorpusIndex CorpusIndex::build(std::span<const EmbeddingRecord> records,
                               IndexMode mode, Precision precision) {
  validate_mode_precision(mode, precision);
  if (records.empty()) {
    throw InvalidArgument("cannot build an index from an empty corpus");
  }
  const std::size_t dim = record_dim(records.front());
  CorpusIndex index(mode, precision, dim);
  index.entries_.reserve(records.size());
  std::unordered_set<std::string> seen;
  for (const auto& rec : records) {
    const auto& id = record_id(rec);
    if (!seen.insert(id).second) {
      throw InvalidArgument("duplicate document id '" + id + "'");
    }
    if (record_dim(rec) != dim) {
      throw InvalidArgument("document '" + id + "' has dim " +
                            std::to_string(record_dim(rec)) + ", expected " +
                            std::to_string(dim));
    }
    const bool pooled_record = std::holds_alternative<PooledVector>(rec);
    if (mode == IndexMode::kPooled && !pooled_record) {
      throw InvalidArgument("pooled index needs pooled vectors; document '" +
                            id + "' is multi-vector");
    }
    std::span<const double> values =
        pooled_record ? std::get<PooledVector>(rec).values()
                      : std::get<TokenMatrix>(rec).values();
    const std::size_t rows = record_rows(rec);
    index.add_entry(id, rows, encode_payload(precision, rows, dim, values));
  }
  return index;
}

void CorpusIndex::check_query_dim(std::size_t dim) const {
  if (dim != dim_) {
    throw InvalidArgument("query dim " + std::to_string(dim) +
                          " does not match index dim " + std::to_string(dim_));
  }
}

double CorpusIndex::score(const Entry& doc, const TokenMatrix& query,
                          SimilarityKind kind) const {
  check_query_dim(query.dim());
  switch (mode_) {
    case IndexMode::kMultiVector:
      return maxsim_score(query.values(), doc.values, dim_, kind);
    case IndexMode::kBinary:
      return binary_score(doc, binary_quantize(query));
    case IndexMode::kPooled:
      break;
  }
  throw InvalidArgument("a pooled index cannot be searched with a multi-vector query");
}

double CorpusIndex::score(const Entry& doc, const PooledVector& query,
                          SimilarityKind kind) const {
  check_query_dim(query.dim());
  if (mode_ != IndexMode::kPooled) {
    throw InvalidArgument("a " + std::string(to_string(mode_)) +
                          " index cannot be searched with a pooled query");
  }
  return similarity(query.values(), doc.values, kind);
}

double CorpusIndex::binary_score(const Entry& doc,
                                 const BinaryMatrix& query) const {
  const std::size_t w = BinaryMatrix::words_per_row(dim_);
  const std::span<const std::uint64_t> bits(doc.bits);
  double total = 0.0;
  for (std::size_t i = 0; i < query.rows(); ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j < doc.rows; ++j) {
      best = std::max(best,
                      hamming_similarity(query.row(i), bits.subspan(j * w, w), dim_));
    }
    total += best;
  }
  return total;
}

std::vector<SearchResult> CorpusIndex::rank(std::vector<SearchResult> scored,
                                            std::size_t k) const {
  const auto better = [](const SearchResult& a, const SearchResult& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  };
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n),
                    scored.end(), better);
  scored.resize(n);
  for (std::size_t i = 0; i < n; ++i) scored[i].rank = i + 1;
  return scored;
}

std::vector<SearchResult> CorpusIndex::search(const TokenMatrix& query,
                                              std::size_t k,
                                              SimilarityKind kind) const {
  if (k == 0) throw InvalidArgument("search: k must be >= 1");
  if (mode_ == IndexMode::kPooled) {
    throw InvalidArgument("a pooled index cannot be searched with a multi-vector query");
  }
  check_query_dim(query.dim());
  std::vector<SearchResult> scored;
  scored.reserve(entries_.size());
  if (mode_ == IndexMode::kBinary) {
    const BinaryMatrix packed = binary_quantize(query);
    for (const auto& e : entries_) {
      scored.push_back({e.id, binary_score(e, packed), 0});
    }
  } else {
    for (const auto& e : entries_) {
      scored.push_back({e.id, maxsim_score(query.values(), e.values, dim_, kind), 0});
    }
  }
  return rank(std::move(scored), k);
}

std::vector<SearchResult> CorpusIndex::search(const PooledVector& query,
                                              std::size_t k,
                                              SimilarityKind kind) const {
  if (k == 0) throw InvalidArgument("search: k must be >= 1");
  if (mode_ != IndexMode::kPooled) {
    throw InvalidArgument("a " + std::string(to_string(mode_)) +
                          " index cannot be searched with a pooled query");
  }
  check_query_dim(query.dim());
  std::vector<SearchResult> scored;
  scored.reserve(entries_.size());
  for (const auto& e : entries_) scored.push_back({e.id, score(e, query, kind), 0});
  return rank(std::move(scored), k);
}

std::vector<SearchResult> CorpusIndex::search(const EmbeddingRecord& query,
                                              std::size_t k,
                                              SimilarityKind kind) const {
  return std::visit([&](const auto& q) { return search(q, k, kind); }, query);
}

IndexStats CorpusIndex::stats() const {
  IndexStats s;
  s.mode = mode_;
  s.precision = precision_;
  s.dim = dim_;
  s.doc_count = entries_.size();
  s.total_token_count = total_tokens_;
  s.mean_rows = entries_.empty() ? 0.0
                                 : static_cast<double>(total_tokens_) /
                                       static_cast<double>(entries_.size());
  s.elements_per_doc = s.mean_rows * static_cast<double>(dim_);
  s.disk_bytes = serialized_size();
  return s;
}

std::vector<SearchResult> search(const CorpusIndex& index,
                                 const EmbeddingRecord& query, std::size_t k,
                                 SimilarityKind kind) {
  return index.search(query, k, kind);
}

IndexStats index_stats(const CorpusIndex& index) { return index.stats(); }

}  // namespace latebench
