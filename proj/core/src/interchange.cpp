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

#include "latebench/interchange.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "latebench/error.hpp"

namespace latebench {
namespace {

using nlohmann::json;

std::vector<double> numbers(const json& arr, const char* what) {
  if (!arr.is_array()) {
    throw ParseError(std::string("'") + what + "' must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& x : arr) {
    if (!x.is_number()) {
      throw ParseError(std::string("'") + what + "' contains a non-number");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

bool rows_unit(const std::vector<double>& values, std::size_t rows,
               std::size_t dim) {
  for (std::size_t i = 0; i < rows; ++i) {
    std::span<const double> r(values.data() + i * dim, dim);
    if (std::abs(l2_norm(r) - 1.0) > kUnitNormTolerance) return false;
  }
  return true;
}

}  // namespace

const std::string& record_id(const EmbeddingRecord& r) {
  return std::visit([](const auto& x) -> const std::string& { return x.id(); },
                    r);
}

std::size_t record_dim(const EmbeddingRecord& r) {
  return std::visit([](const auto& x) { return x.dim(); }, r);
}

std::size_t record_rows(const EmbeddingRecord& r) {
  if (const auto* m = std::get_if<TokenMatrix>(&r)) return m->rows();
  return 1;
}

EmbeddingRecord parse_embedding_record(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("record must be a JSON object");
  if (!j.contains("id") || !j["id"].is_string()) {
    throw ParseError("record is missing string field 'id'");
  }
  std::string id = j["id"].get<std::string>();
  const bool has_tokens = j.contains("tokens");
  const bool has_vector = j.contains("vector");
  if (has_tokens == has_vector) {
    throw ParseError("record '" + id +
                     "' must carry exactly one of 'tokens' or 'vector'");
  }

  try {
    if (has_vector) {
      auto v = numbers(j["vector"], "vector");
      return PooledVector(std::move(id), v, Pooling::kMean);
    }
    const json& toks = j["tokens"];
    if (!toks.is_array() || toks.empty()) {
      throw ParseError("record '" + id + "' has no tokens");
    }
    const std::size_t rows = toks.size();
    std::vector<double> values;
    std::size_t dim = 0;
    for (const auto& row : toks) {
      auto r = numbers(row, "tokens");
      if (dim == 0) dim = r.size();
      if (r.size() != dim || dim == 0) {
        throw ParseError("record '" + id + "' has ragged token rows");
      }
      values.insert(values.end(), r.begin(), r.end());
    }
    if (rows_unit(values, rows, dim)) {
      return TokenMatrix(std::move(id), rows, dim, std::move(values), true);
    }
    return TokenMatrix::from_rows_normalized(std::move(id), rows, dim, values);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

std::string format_embedding_record(const TokenMatrix& m) {
  json toks = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    toks.push_back(json(std::vector<double>(r.begin(), r.end())));
  }
  json j{{"id", m.id()}, {"tokens", std::move(toks)}};
  return j.dump();
}

std::string format_embedding_record(const PooledVector& v) {
  auto vals = v.values();
  json j{{"id", v.id()},
         {"vector", std::vector<double>(vals.begin(), vals.end())}};
  return j.dump();
}

std::string format_embedding_record(const EmbeddingRecord& r) {
  return std::visit([](const auto& x) { return format_embedding_record(x); },
                    r);
}

std::vector<EmbeddingRecord> read_embeddings(std::istream& in) {
  std::vector<EmbeddingRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_embedding_record(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<EmbeddingRecord> read_embeddings_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_embeddings(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_embeddings(std::ostream& out,
                      const std::vector<EmbeddingRecord>& records) {
  for (const auto& r : records) out << format_embedding_record(r) << '\n';
}

void write_embeddings_file(const std::filesystem::path& path,
                           const std::vector<EmbeddingRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_embeddings(out, records);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace latebench
