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

#include "latebench/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "latebench/error.hpp"

namespace latebench {

void CostScenario::validate() const {
  if (!(sequence_length > 0.0) || !std::isfinite(sequence_length)) {
    throw InvalidArgument("scenario '" + name + "': sequence length must be positive");
  }
  if (dim == 0) throw InvalidArgument("scenario '" + name + "': dim must be positive");
  if (!(corpus_size >= 0.0) || !std::isfinite(corpus_size)) {
    throw InvalidArgument("scenario '" + name + "': corpus size must be non-negative");
  }
  if (rerank_depth && *rerank_depth == 0) {
    throw InvalidArgument("scenario '" + name + "': rerank depth must be positive");
  }
}

double bytes_per_element(Precision precision) noexcept {
  return static_cast<double>(bits_per_element(precision)) / 8.0;
}

StorageEstimate storage_estimate(const CostScenario& s) {
  s.validate();
  StorageEstimate e;
  e.elements_per_doc = s.sequence_length * static_cast<double>(s.dim);
  e.bytes = e.elements_per_doc * bytes_per_element(s.precision) * s.corpus_size;
  e.gib = e.bytes / kBytesPerGiB;
  return e;
}

std::string format_gib(double gib) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(1) << gib;
  return ss.str();
}

WhatIfReport compression_whatif(const CostScenario& s, std::size_t projection_dim,
                                std::size_t late_pool_factor, Precision precision) {
  s.validate();
  if (projection_dim == 0 || projection_dim > s.dim) {
    throw InvalidArgument("projection dim must lie in [1, " + std::to_string(s.dim) + "]");
  }
  if (late_pool_factor == 0) throw InvalidArgument("late pool factor must be >= 1");
  WhatIfReport r;
  r.before = s;
  r.after = s;
  r.after.sequence_length = std::ceil(s.sequence_length / static_cast<double>(late_pool_factor));
  r.after.dim = projection_dim;
  r.after.precision = precision;
  return compare_storage(r.before, r.after);
}

WhatIfReport compare_storage(const CostScenario& before, const CostScenario& after) {
  WhatIfReport r;
  r.before = before;
  r.after = after;
  r.before_storage = storage_estimate(before);
  r.after_storage = storage_estimate(after);
  r.saved_bytes = r.before_storage.bytes - r.after_storage.bytes;
  r.saved_percent = r.before_storage.bytes > 0.0
                        ? 100.0 * r.saved_bytes / r.before_storage.bytes
                        : 0.0;
  return r;
}

LatencyModel fit_latency_model(std::span<const LatencyPoint> points) {
  if (points.size() < 2) {
    throw InvalidArgument("latency fit needs at least two points");
  }
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    if (!std::isfinite(p.candidates) || !std::isfinite(p.ms)) {
      throw InvalidArgument("latency fit: non-finite point");
    }
    mx += p.candidates;
    my += p.ms;
  }
  const double n = static_cast<double>(points.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.candidates - mx) * (p.candidates - mx);
    sxy += (p.candidates - mx) * (p.ms - my);
  }
  if (sxx == 0.0) {
    throw InvalidArgument("latency fit: all points share the same candidate count");
  }
  LatencyModel m;
  m.per_candidate_ms = sxy / sxx;
  m.base_ms = my - m.per_candidate_ms * mx;
  if (!(m.per_candidate_ms > 0.0)) {
    throw InvalidArgument("latency fit: latency does not grow with candidates");
  }
  return m;
}

TradeoffSort parse_tradeoff_sort(const std::string& name) {
  if (name == "input") return TradeoffSort::kInput;
  if (name == "storage") return TradeoffSort::kStorage;
  if (name == "latency") return TradeoffSort::kLatency;
  if (name == "name") return TradeoffSort::kName;
  throw InvalidArgument("unknown sort key '" + name + "' (expected input|storage|latency|name)");
}

std::vector<TradeoffRow> pipeline_tradeoff_report(std::span<const CostScenario> scenarios,
                                                  const LatencyModel& latency,
                                                  TradeoffSort sort) {
  if (scenarios.empty()) throw InvalidArgument("trade-off report needs a scenario");
  std::vector<TradeoffRow> rows;
  for (const auto& s : scenarios) {
    TradeoffRow r{s, storage_estimate(s), 0.0};
    if (s.rerank_depth) r.added_latency_ms = latency.predict(static_cast<double>(*s.rerank_depth));
    rows.push_back(std::move(r));
  }
  auto by = [&](auto key) {
    std::stable_sort(rows.begin(), rows.end(),
                     [&](const TradeoffRow& a, const TradeoffRow& b) { return key(a) < key(b); });
  };
  switch (sort) {
    case TradeoffSort::kInput: break;
    case TradeoffSort::kStorage: by([](const TradeoffRow& r) { return r.storage.bytes; }); break;
    case TradeoffSort::kLatency: by([](const TradeoffRow& r) { return r.added_latency_ms; }); break;
    case TradeoffSort::kName: by([](const TradeoffRow& r) { return r.scenario.name; }); break;
  }
  return rows;
}

void write_tradeoff_table(std::ostream& out, std::span<const TradeoffRow> rows) {
  std::vector<std::string> acc_keys;
  for (const auto& r : rows) {
    for (const auto& [k, v] : r.scenario.accuracy) {
      if (std::find(acc_keys.begin(), acc_keys.end(), k) == acc_keys.end()) acc_keys.push_back(k);
    }
  }
  std::size_t name_w = 8;
  for (const auto& r : rows) name_w = std::max(name_w, r.scenario.name.size());

  std::ostringstream buf;
  const auto w = static_cast<int>(name_w);
  buf << std::left << std::setw(w) << "scenario" << std::right << std::setw(8) << "seq"
      << std::setw(7) << "dim" << std::setw(6) << "prec" << std::setw(13) << "elems/doc"
      << std::setw(12) << "storage_GB" << std::setw(8) << "rerank" << std::setw(12)
      << "added_ms";
  for (const auto& k : acc_keys) buf << std::setw(std::max<int>(10, static_cast<int>(k.size()) + 2)) << k;
  buf << '\n';
  for (const auto& r : rows) {
    const auto& s = r.scenario;
    buf << std::left << std::setw(w) << s.name << std::right << std::setw(8)
        << std::defaultfloat << s.sequence_length << std::setw(7) << s.dim << std::setw(6)
        << to_string(s.precision) << std::setw(13) << std::fixed << std::setprecision(0)
        << r.storage.elements_per_doc << std::setw(12) << format_gib(r.storage.gib)
        << std::setw(8) << (s.rerank_depth ? std::to_string(*s.rerank_depth) : "-")
        << std::setw(12) << std::setprecision(1) << r.added_latency_ms;
    for (const auto& k : acc_keys) {
      const int cw = std::max<int>(10, static_cast<int>(k.size()) + 2);
      auto it = s.accuracy.find(k);
      if (it == s.accuracy.end()) {
        buf << std::setw(cw) << "-";
      } else {
        buf << std::setw(cw) << std::setprecision(4) << it->second;
      }
    }
    buf << '\n';
  }
  out << buf.str();
}

std::vector<CostScenario> read_scenarios(std::istream& in) {
  using nlohmann::json;
  std::vector<CostScenario> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    try {
      const json j = json::parse(line);
      CostScenario s;
      s.name = j.value("name", "scenario" + std::to_string(out.size() + 1));
      s.sequence_length = j.at("seq").get<double>();
      const auto dim = j.at("dim").get<long long>();
      if (dim <= 0) throw InvalidArgument("dim must be positive");
      s.dim = static_cast<std::size_t>(dim);
      s.precision = parse_precision(j.value("precision", "fp16"));
      s.corpus_size = j.value("docs", 1e6);
      if (j.contains("rerank_depth") && !j["rerank_depth"].is_null()) {
        const auto depth = j["rerank_depth"].get<long long>();
        if (depth <= 0) throw InvalidArgument("rerank_depth must be positive");
        s.rerank_depth = static_cast<std::size_t>(depth);
      }
      if (j.contains("accuracy")) {
        for (const auto& [k, v] : j["accuracy"].items()) s.accuracy[k] = v.get<double>();
      }
      s.validate();
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw ParseError(where + e.what());
    } catch (const InvalidArgument& e) {
      throw ParseError(where + e.what());
    }
  }
  return out;
}

std::vector<CostScenario> read_scenarios_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_scenarios(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<CostScenario> published_scenarios() {
  auto row = [](std::string name, double seq, std::size_t dim,
                std::optional<std::size_t> depth, double v1, double v2) {
    CostScenario s;
    s.name = std::move(name);
    s.sequence_length = seq;
    s.dim = dim;
    s.precision = Precision::kFp16;
    s.corpus_size = 1e6;
    s.rerank_depth = depth;
    s.accuracy = {{"vidore_v1", v1}, {"vidore_v2", v2}};
    return s;
  };
  return {
      row("multivec-3072", 1802, 3072, std::nullopt, 0.9106, 0.6357),
      row("multivec-512", 1290, 512, std::nullopt, 0.9064, 0.6109),
      row("multivec-128", 751, 128, std::nullopt, 0.8906, 0.5290),
      row("single-1536", 1, 1536, std::nullopt, 0.8510, 0.5590),
      row("single-2048", 1, 2048, std::nullopt, 0.8313, 0.5178),
      row("single-2048+rerank10", 1, 2048, 10, 0.8931, 0.6025),
      row("single-2048+rerank25", 1, 2048, 25, 0.9064, 0.6214),
      row("single-2048+rerank100", 1, 2048, 100, 0.9101, 0.6182),
  };
}

std::vector<LatencyPoint> published_latency_points() {
  return {{10, 960}, {25, 2368}, {100, 9392}};
}

}  // namespace latebench
