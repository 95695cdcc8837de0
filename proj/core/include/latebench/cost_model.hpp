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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latebench/index.hpp"

namespace latebench {

inline constexpr double kBytesPerGiB = 1073741824.0;  // 2^30

/// Storage/latency scenario for one retrieval configuration.
struct CostScenario {
  std::string name;
  double sequence_length = 1.0;  // mean embeddings per document
  std::size_t dim = 1;
  Precision precision = Precision::kFp16;
  double corpus_size = 1e6;      // documents
  std::optional<std::size_t> rerank_depth;
  /// Accuracy figures supplied by the user (e.g. {"vidore_v1": 0.91}); carried
  /// through to reports untouched, never computed.
  std::map<std::string, double> accuracy;

  void validate() const;
};

/// 4, 2, 1 or 0.125.
double bytes_per_element(Precision precision) noexcept;

struct StorageEstimate {
  double elements_per_doc = 0.0;
  double bytes = 0.0;
  double gib = 0.0;
};

/// elements_per_doc = sequence_length * dim,
/// bytes = elements_per_doc * bytes_per_element * corpus_size, GiB = bytes / 2^30.
StorageEstimate storage_estimate(const CostScenario& s);

/// GiB rounded to one decimal, e.g. "10311.1".
std::string format_gib(double gib);

struct WhatIfReport {
  CostScenario before;
  CostScenario after;
  StorageEstimate before_storage;
  StorageEstimate after_storage;
  double saved_bytes = 0.0;
  double saved_percent = 0.0;
};

/// Applies late pooling (sequence_length <- ceil(sequence_length / factor)),
/// a projection to `projection_dim` and a new storage precision.
WhatIfReport compression_whatif(const CostScenario& s, std::size_t projection_dim,
                                std::size_t late_pool_factor, Precision precision);

/// latency_ms = base_ms + per_candidate_ms * candidates
/// Before/after storage of two arbitrary scenarios, e.g. a lower image
/// resolution combined with a projection.
WhatIfReport compare_storage(const CostScenario& before, const CostScenario& after);

struct LatencyModel {
  double base_ms = 0.0;
  double per_candidate_ms = 0.0;

  double predict(double candidates) const noexcept {
    return base_ms + per_candidate_ms * candidates;
  }
};

struct LatencyPoint {
  double candidates = 0.0;
  double ms = 0.0;
};

/// Ordinary least squares. Needs at least two distinct candidate counts and a
/// positive fitted slope.
LatencyModel fit_latency_model(std::span<const LatencyPoint> points);

struct TradeoffRow {
  CostScenario scenario;
  StorageEstimate storage;
  double added_latency_ms = 0.0;  // 0 without a reranker
};

enum class TradeoffSort { kInput, kStorage, kLatency, kName };

TradeoffSort parse_tradeoff_sort(const std::string& name);

std::vector<TradeoffRow> pipeline_tradeoff_report(
    std::span<const CostScenario> scenarios, const LatencyModel& latency,
    TradeoffSort sort = TradeoffSort::kInput);

void write_tradeoff_table(std::ostream& out, std::span<const TradeoffRow> rows);

/// Scenario file: JSON Lines, one object per scenario:
///   {"name": "...", "seq": 1802, "dim": 3072, "precision": "fp16",
///    "docs": 1000000, "rerank_depth": 10, "accuracy": {"vidore_v1": 0.91}}
/// `name`, `rerank_depth` and `accuracy` are optional; `docs` defaults to 1e6.
std::vector<CostScenario> read_scenarios(std::istream& in);
std::vector<CostScenario> read_scenarios_file(const std::filesystem::path& path);

/// The five storage rows and three reranker rows of the published comparison
/// of late-interaction and bi-encoder pipelines (1M documents, fp16).
std::vector<CostScenario> published_scenarios();

/// (candidates reranked, added ms/query) of the published reranker rows.
std::vector<LatencyPoint> published_latency_points();

}  // namespace latebench
