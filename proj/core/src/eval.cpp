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

#include "latebench/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "latebench/error.hpp"

namespace latebench {

int Qrels::grade(const std::string& query, const std::string& doc) const {
  auto q = judgments.find(query);
  if (q == judgments.end()) return 0;
  auto d = q->second.find(doc);
  return d == q->second.end() ? 0 : d->second;
}

void Qrels::add(const std::string& query, const std::string& doc, int grade) {
  if (grade < 0) {
    throw InvalidArgument("negative relevance grade for (" + query + ", " + doc + ")");
  }
  if (!judgments[query].emplace(doc, grade).second) {
    throw InvalidArgument("duplicate judgment for (" + query + ", " + doc + ")");
  }
}

void RunFile::validate() const {
  for (const auto& [qid, entries] : rankings) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!seen.insert(entries[i].doc_id).second) {
        throw InvalidArgument("run lists document '" + entries[i].doc_id +
                              "' twice for query '" + qid + "'");
      }
      if (i > 0 && entries[i].score > entries[i - 1].score) {
        throw InvalidArgument("run scores increase with rank for query '" + qid + "'");
      }
    }
  }
}

namespace {

std::vector<std::string> fields(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string f;
  while (ss >> f) out.push_back(f);
  return out;
}

template <class T>
T number(const std::string& s, const std::string& where, const char* what) {
  std::istringstream ss(s);
  T v{};
  ss >> v;
  if (!ss || !ss.eof()) {
    throw ParseError(where + "bad " + what + " '" + s + "'");
  }
  return v;
}

template <class F>
auto with_file(const std::filesystem::path& path, F read) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace

Qrels read_qrels(std::istream& in) {
  Qrels q;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto f = fields(line);
    if (f.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (f.size() != 4) throw ParseError(where + "expected 'query_id 0 doc_id grade'");
    const int grade = number<int>(f[3], where, "grade");
    try {
      q.add(f[0], f[2], grade);
    } catch (const InvalidArgument& e) {
      throw ParseError(where + e.what());
    }
  }
  return q;
}

Qrels read_qrels_file(const std::filesystem::path& path) {
  return with_file(path, [](std::istream& in) { return read_qrels(in); });
}

void write_qrels(std::ostream& out, const Qrels& qrels) {
  for (const auto& [qid, docs] : qrels.judgments) {
    for (const auto& [doc, grade] : docs) out << qid << " 0 " << doc << ' ' << grade << '\n';
  }
}

RunFile read_run(std::istream& in) {
  struct Row {
    long rank;
    RunEntry entry;
  };
  std::map<std::string, std::vector<Row>> rows;
  std::string tag;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto f = fields(line);
    if (f.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (f.size() != 6) {
      throw ParseError(where + "expected 'query_id Q0 doc_id rank score tag'");
    }
    const long rank = number<long>(f[3], where, "rank");
    const double score = number<double>(f[4], where, "score");
    if (!std::isfinite(score)) throw ParseError(where + "non-finite score");
    rows[f[0]].push_back({rank, {f[2], score}});
    if (tag.empty()) tag = f[5];
  }
  RunFile run;
  if (!tag.empty()) run.tag = tag;
  for (auto& [qid, r] : rows) {
    std::stable_sort(r.begin(), r.end(),
                     [](const Row& a, const Row& b) { return a.rank < b.rank; });
    auto& out = run.rankings[qid];
    for (auto& row : r) out.push_back(std::move(row.entry));
  }
  try {
    run.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return run;
}

RunFile read_run_file(const std::filesystem::path& path) {
  return with_file(path, [](std::istream& in) { return read_run(in); });
}

void write_run(std::ostream& out, const RunFile& run) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  for (const auto& [qid, entries] : run.rankings) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      buf << qid << " Q0 " << entries[i].doc_id << ' ' << (i + 1) << ' '
          << entries[i].score << ' ' << run.tag << '\n';
    }
  }
  out << buf.str();
}

double dcg(const std::vector<int>& grades, std::size_t k) {
  double total = 0.0;
  const std::size_t n = std::min(k, grades.size());
  for (std::size_t i = 0; i < n; ++i) {
    total += (std::exp2(grades[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  return total;
}

NdcgReport ndcg_at_k(const Qrels& qrels, const RunFile& run, std::size_t k) {
  if (k == 0) throw InvalidArgument("nDCG cutoff k must be >= 1");
  run.validate();
  NdcgReport report;
  report.k = k;
  for (const auto& [qid, entries] : run.rankings) {
    auto judged = qrels.judgments.find(qid);
    if (judged == qrels.judgments.end()) {
      throw InvalidArgument("run query '" + qid + "' has no relevance judgments");
    }
    std::vector<int> ideal;
    for (const auto& [doc, grade] : judged->second) ideal.push_back(grade);
    std::sort(ideal.rbegin(), ideal.rend());
    const double idcg = dcg(ideal, k);
    if (idcg == 0.0) {
      report.excluded.push_back(qid);
      continue;
    }
    std::vector<int> got;
    got.reserve(entries.size());
    for (const auto& e : entries) got.push_back(qrels.grade(qid, e.doc_id));
    report.per_query[qid] = dcg(got, k) / idcg;
  }
  if (!report.per_query.empty()) {
    double sum = 0.0;
    for (const auto& [qid, v] : report.per_query) sum += v;
    report.mean = sum / static_cast<double>(report.per_query.size());
  }
  return report;
}

EvaluationReport evaluate_pipeline(const CorpusIndex& index,
                                   const std::vector<EmbeddingRecord>& queries,
                                   const Qrels& qrels, std::size_t k,
                                   SimilarityKind kind, std::string label) {
  EvaluationReport report;
  report.label = label.empty() ? std::string(to_string(index.mode())) : std::move(label);
  report.mode = index.mode();
  report.kind = kind;
  report.run.tag = report.label;
  for (const auto& q : queries) {
    auto& ranking = report.run.rankings[record_id(q)];
    if (!ranking.empty()) {
      throw InvalidArgument("duplicate query id '" + record_id(q) + "'");
    }
    for (const auto& r : index.search(q, k, kind)) ranking.push_back({r.doc_id, r.score});
  }
  report.ndcg = ndcg_at_k(qrels, report.run, k);
  return report;
}

void write_comparison_table(std::ostream& out,
                            const std::vector<EvaluationReport>& reports) {
  std::set<std::string> queries;
  for (const auto& r : reports) {
    for (const auto& [qid, v] : r.ndcg.per_query) queries.insert(qid);
  }
  std::size_t qwidth = 5;
  for (const auto& q : queries) qwidth = std::max(qwidth, q.size());
  std::vector<std::size_t> widths;
  for (const auto& r : reports) widths.push_back(std::max<std::size_t>(10, r.label.size()));

  std::ostringstream buf;
  buf << std::left << std::setw(static_cast<int>(qwidth)) << "query";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    buf << "  " << std::right << std::setw(static_cast<int>(widths[i])) << reports[i].label;
  }
  buf << '\n' << std::fixed << std::setprecision(4);
  auto row = [&](const std::string& name, auto value_of) {
    buf << std::left << std::setw(static_cast<int>(qwidth)) << name;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      buf << "  " << std::right << std::setw(static_cast<int>(widths[i]));
      value_of(reports[i]);
    }
    buf << '\n';
  };
  for (const auto& q : queries) {
    row(q, [&](const EvaluationReport& r) {
      auto it = r.ndcg.per_query.find(q);
      if (it == r.ndcg.per_query.end()) {
        buf << "-";
      } else {
        buf << it->second;
      }
    });
  }
  row("mean", [&](const EvaluationReport& r) { buf << r.ndcg.mean; });
  out << buf.str();
}

}  // namespace latebench
