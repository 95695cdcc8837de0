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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "latebench/index.hpp"
#include "latebench/interchange.hpp"

namespace latebench {

/// Relevance judgments: query id -> (doc id -> grade >= 0).
struct Qrels {
  std::map<std::string, std::map<std::string, int>> judgments;

  int grade(const std::string& query, const std::string& doc) const;
  void add(const std::string& query, const std::string& doc, int grade);
};

struct RunEntry {
  std::string doc_id;
  double score = 0.0;
};

/// Ranked lists per query, best first.
struct RunFile {
  std::map<std::string, std::vector<RunEntry>> rankings;
  std::string tag = "latebench";

  /// Throws InvalidArgument on a duplicate doc id or increasing scores.
  void validate() const;
};

/// TREC qrels: `query_id 0 doc_id grade` per line.
Qrels read_qrels(std::istream& in);
Qrels read_qrels_file(const std::filesystem::path& path);
void write_qrels(std::ostream& out, const Qrels& qrels);

/// TREC run: `query_id Q0 doc_id rank score tag` per line. Entries are ordered
/// by rank within a query.
RunFile read_run(std::istream& in);
RunFile read_run_file(const std::filesystem::path& path);
void write_run(std::ostream& out, const RunFile& run);

struct NdcgReport {
  std::size_t k = 0;
  /// Queries with a non-zero ideal DCG.
  std::map<std::string, double> per_query;
  /// Queries dropped because no judged document is relevant (IDCG = 0).
  std::vector<std::string> excluded;
  double mean = 0.0;
};

/// DCG@k with exponential gain (2^rel - 1) and log2(rank + 1) discount.
double dcg(const std::vector<int>& grades_in_rank_order, std::size_t k);

/// nDCG@k for every query of the run. Every run query must appear in the
/// qrels. Queries whose IDCG is zero are excluded from the mean and listed.
NdcgReport ndcg_at_k(const Qrels& qrels, const RunFile& run, std::size_t k);

struct EvaluationReport {
  std::string label;
  IndexMode mode{};
  SimilarityKind kind{};
  RunFile run;
  NdcgReport ndcg;
};

/// Searches every query against the index, materializes the run and scores
/// it with nDCG@k.
EvaluationReport evaluate_pipeline(const CorpusIndex& index,
                                   const std::vector<EmbeddingRecord>& queries,
                                   const Qrels& qrels, std::size_t k,
                                   SimilarityKind kind = SimilarityKind::kDot,
                                   std::string label = {});

/// Aligned text table: one row per query plus a mean row, one column per report.
void write_comparison_table(std::ostream& out,
                            const std::vector<EvaluationReport>& reports);

}  // namespace latebench
