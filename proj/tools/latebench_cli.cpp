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

// latebench: command-line front end for encoding, indexing, search,
// evaluation, hard-negative mining, the training demo and cost estimates.
//
// Exit status: 0 success, 2 usage, 3 I/O, 4 invalid input or arguments,
// 5 training divergence.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latebench/cost_model.hpp"
#include "latebench/encoder.hpp"
#include "latebench/error.hpp"
#include "latebench/eval.hpp"
#include "latebench/index.hpp"
#include "latebench/interchange.hpp"
#include "latebench/synthetic.hpp"
#include "latebench/train_demo.hpp"
#include "latebench/training.hpp"

namespace fs = std::filesystem;
namespace lb = latebench;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 2, kIo = 3, kInvalid = 4, kDiverged = 5 };

const std::vector<std::string> kModes{"multi_vector", "pooled", "binary"};
const std::vector<std::string> kPrecisions{"fp32", "fp16", "int8", "bit1"};
const std::vector<std::string> kKinds{"dot", "cosine"};
const std::vector<std::string> kPoolings{"mean", "last_token"};
const std::vector<std::string> kFormats{"text", "json"};

struct Common {
  std::string format = "text";
  std::uint64_t seed = 0;
};

void add_format(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember(kFormats))
      ->capture_default_str();
}

void add_seed(CLI::App* cmd, Common& c, const std::string& what) {
  cmd->add_option("--seed", c.seed, "Seed for " + what)->capture_default_str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lb::IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void close_out(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw lb::IoError("failed writing '" + path.string() + "'");
}

// Prints `j` as JSON, or `text` otherwise.
void emit(const Common& c, const json& j, const std::string& text) {
  if (c.format == "json") {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << text;
  }
}

std::string fixed(double v, int digits) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

// --- encode ---------------------------------------------------------------

struct EncodeArgs {
  std::string input, output, pooling;
  std::size_t dim = lb::EncoderConfig{}.dim;
  std::size_t max_tokens = lb::EncoderConfig{}.max_tokens;
};

int run_encode(const EncodeArgs& a, const Common& c) {
  const lb::EncoderConfig cfg{a.dim, c.seed, a.max_tokens};
  cfg.validate();
  const auto corpus = lb::read_text_corpus_file(a.input);
  auto out = open_out(a.output);
  std::size_t rows = 0;
  for (const auto& r : corpus) {
    if (a.pooling.empty()) {
      auto m = lb::encode_text(r.text, cfg, r.id);
      rows += m.rows();
      out << lb::format_embedding_record(m) << '\n';
    } else {
      out << lb::format_embedding_record(
                 lb::encode_pooled(r.text, cfg, lb::parse_pooling(a.pooling), r.id))
          << '\n';
      ++rows;
    }
  }
  close_out(out, a.output);
  emit(c,
       {{"records", corpus.size()}, {"rows", rows}, {"dim", a.dim}, {"output", a.output}},
       "encoded " + std::to_string(corpus.size()) + " records (" + std::to_string(rows) +
           " rows, dim " + std::to_string(a.dim) + ") -> " + a.output + "\n");
  return kOk;
}

// --- index / stats --------------------------------------------------------

json stats_json(const lb::IndexStats& s) {
  return {{"mode", lb::to_string(s.mode)},
          {"precision", lb::to_string(s.precision)},
          {"dim", s.dim},
          {"doc_count", s.doc_count},
          {"total_token_count", s.total_token_count},
          {"mean_rows", s.mean_rows},
          {"elements_per_doc", s.elements_per_doc},
          {"disk_bytes", s.disk_bytes}};
}

std::string stats_text(const lb::IndexStats& s) {
  std::ostringstream ss;
  ss << "mode              " << lb::to_string(s.mode) << '\n'
     << "precision         " << lb::to_string(s.precision) << '\n'
     << "dim               " << s.dim << '\n'
     << "doc_count         " << s.doc_count << '\n'
     << "total_token_count " << s.total_token_count << '\n'
     << "mean_rows         " << s.mean_rows << '\n'
     << "elements_per_doc  " << std::setprecision(15) << s.elements_per_doc << '\n'
     << "disk_bytes        " << s.disk_bytes << '\n';
  return ss.str();
}

struct IndexArgs {
  std::string input, output, mode = "multi_vector", precision = "fp32";
};

int run_index(const IndexArgs& a, const Common& c) {
  const auto records = lb::read_embeddings_file(a.input);
  const auto idx = lb::CorpusIndex::build(records, lb::parse_index_mode(a.mode),
                                          lb::parse_precision(a.precision));
  idx.save(fs::path(a.output));
  const auto s = lb::index_stats(idx);
  emit(c, stats_json(s), "indexed " + std::to_string(s.doc_count) + " documents -> " +
                             a.output + "\n" + stats_text(s));
  return kOk;
}

int run_stats(const std::string& path, const Common& c) {
  const auto s = lb::index_stats(lb::CorpusIndex::load(fs::path(path)));
  emit(c, stats_json(s), stats_text(s));
  return kOk;
}

// --- search ---------------------------------------------------------------

struct SearchArgs {
  std::string index, queries, output, kind = "dot", tag;
  std::size_t k = 10;
};

int run_search(const SearchArgs& a, const Common& c) {
  const auto idx = lb::CorpusIndex::load(fs::path(a.index));
  const auto queries = lb::read_embeddings_file(a.queries);
  const auto kind = lb::parse_similarity_kind(a.kind);
  lb::RunFile run;
  run.tag = a.tag.empty() ? std::string(lb::to_string(idx.mode())) : a.tag;
  json results = json::object();
  for (const auto& q : queries) {
    const auto& qid = lb::record_id(q);
    if (run.rankings.count(qid)) throw lb::InvalidArgument("duplicate query id '" + qid + "'");
    auto& ranking = run.rankings[qid];
    json list = json::array();
    for (const auto& r : idx.search(q, a.k, kind)) {
      ranking.push_back({r.doc_id, r.score});
      list.push_back({{"doc_id", r.doc_id}, {"score", r.score}, {"rank", r.rank}});
    }
    results[qid] = std::move(list);
  }
  std::ostringstream text;
  if (a.output.empty()) {
    lb::write_run(text, run);
  } else {
    auto out = open_out(a.output);
    lb::write_run(out, run);
    close_out(out, a.output);
    text << "searched " << queries.size() << " queries (k=" << a.k << ") -> " << a.output << '\n';
  }
  emit(c, {{"tag", run.tag}, {"k", a.k}, {"results", results}}, text.str());
  return kOk;
}

// --- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string qrels;
  std::vector<std::string> runs;
  std::size_t k = 5;
};

int run_eval(const EvalArgs& a, const Common& c) {
  const auto qrels = lb::read_qrels_file(a.qrels);
  std::vector<lb::EvaluationReport> reports;
  json j = json::array();
  for (const auto& path : a.runs) {
    lb::EvaluationReport r;
    r.run = lb::read_run_file(path);
    r.label = r.run.tag;
    for (const auto& other : reports) {
      if (other.label == r.label) r.label += "#" + std::to_string(reports.size() + 1);
    }
    r.ndcg = lb::ndcg_at_k(qrels, r.run, a.k);
    j.push_back({{"run", path},
                 {"label", r.label},
                 {"k", a.k},
                 {"mean", r.ndcg.mean},
                 {"per_query", r.ndcg.per_query},
                 {"excluded", r.ndcg.excluded}});
    reports.push_back(std::move(r));
  }
  std::ostringstream text;
  text << "nDCG@" << a.k << '\n';
  lb::write_comparison_table(text, reports);
  for (const auto& r : reports) {
    if (!r.ndcg.excluded.empty()) {
      text << r.label << ": excluded " << r.ndcg.excluded.size()
           << " queries with no relevant judged document\n";
    }
  }
  emit(c, j, text.str());
  return kOk;
}

// --- mine -----------------------------------------------------------------

struct MineArgs {
  std::string corpus, pairs, output, kind = "dot", representation = "pooled";
  std::size_t dim = lb::EncoderConfig{}.dim;
  lb::ContrastiveConfig contrastive;
};

int run_mine(const MineArgs& a, const Common& c) {
  a.contrastive.validate();
  const lb::EncoderConfig enc{a.dim, c.seed, lb::EncoderConfig{}.max_tokens};
  enc.validate();
  const auto kind = lb::parse_similarity_kind(a.kind);
  const auto docs = lb::read_text_corpus_file(a.corpus);
  auto pairs = lb::read_training_pairs_file(a.pairs);
  const bool pooled = a.representation == "pooled";

  std::vector<lb::PooledVector> pdocs;
  std::vector<lb::TokenMatrix> mdocs;
  std::unordered_map<std::string, std::size_t> at;
  for (const auto& d : docs) {
    at.emplace(d.id, at.size());
    if (pooled) {
      pdocs.push_back(lb::encode_pooled(d.text, enc, lb::Pooling::kMean, d.id));
    } else {
      mdocs.push_back(lb::encode_text(d.text, enc, d.id));
    }
  }
  std::size_t total = 0;
  for (auto& p : pairs) {
    auto it = at.find(p.positive_id);
    if (it == at.end()) {
      throw lb::InvalidArgument("pair positive '" + p.positive_id + "' is not in the corpus");
    }
    // Candidates: the pair's own negatives if given, else every other document.
    std::vector<std::size_t> pool;
    if (p.negative_ids.empty()) {
      for (std::size_t i = 0; i < docs.size(); ++i) {
        if (i != it->second) pool.push_back(i);
      }
    } else {
      for (const auto& n : p.negative_ids) {
        auto jt = at.find(n);
        if (jt == at.end()) throw lb::InvalidArgument("negative '" + n + "' is not in the corpus");
        if (jt->second != it->second) pool.push_back(jt->second);
      }
    }
    std::vector<lb::ScoredCandidate> mined;
    if (pooled) {
      const auto q = lb::encode_pooled(p.query, enc, lb::Pooling::kMean, "query");
      std::vector<lb::PooledVector> cand;
      for (auto i : pool) cand.push_back(pdocs[i]);
      mined = lb::mine_hard_negatives(q, pdocs[it->second], std::span<const lb::PooledVector>(cand),
                                      a.contrastive, kind);
    } else {
      const auto q = lb::encode_text(p.query, enc, "query");
      std::vector<lb::TokenMatrix> cand;
      for (auto i : pool) cand.push_back(mdocs[i]);
      mined = lb::mine_hard_negatives(q, mdocs[it->second], std::span<const lb::TokenMatrix>(cand),
                                      a.contrastive, kind);
    }
    p.negative_ids.clear();
    for (const auto& m : mined) p.negative_ids.push_back(m.id);
    total += mined.size();
  }
  auto out = open_out(a.output);
  lb::write_training_pairs(out, pairs);
  close_out(out, a.output);
  emit(c, {{"pairs", pairs.size()}, {"negatives", total}, {"output", a.output}},
       "mined " + std::to_string(total) + " negatives for " + std::to_string(pairs.size()) +
           " pairs -> " + a.output + "\n");
  return kOk;
}

// --- train-demo -----------------------------------------------------------

struct TrainArgs {
  std::string stage1_corpus, stage1_pairs, stage2_corpus, stage2_pairs, stage2_images, log;
  std::size_t pairs = 100, vocab = 1000;
  bool cold = false;
  lb::DemoConfig cfg;
};

lb::TrainingCorpus load_stage(const std::string& corpus, const std::string& pairs,
                              const std::string& images) {
  lb::TrainingCorpus c;
  c.documents = lb::read_text_corpus_file(corpus);
  c.pairs = lb::read_training_pairs_file(pairs);
  if (!images.empty()) {
    std::ifstream in(images);
    if (!in) throw lb::IoError("cannot open '" + images + "' for reading");
    std::string id;
    while (in >> id) c.image_ids.push_back(id);
  }
  return c;
}

json stage_json(const lb::StageReport& s) {
  json epochs = json::array();
  for (const auto& e : s.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"mean_loss", e.mean_loss},
                      {"grad_norm", e.grad_norm},
                      {"mean_negatives", e.mean_negatives}});
  }
  return {{"initial_loss", s.initial_loss()}, {"final_loss", s.final_loss()}, {"epochs", epochs}};
}

int run_train(TrainArgs a, const Common& c) {
  a.cfg.seed = c.seed;
  a.cfg.warm_start = !a.cold;
  lb::DemoCorpora data;
  if (a.stage1_corpus.empty() != a.stage1_pairs.empty() ||
      a.stage2_corpus.empty() != a.stage2_pairs.empty() ||
      a.stage1_corpus.empty() != a.stage2_corpus.empty()) {
    throw lb::InvalidArgument(
        "--stage1-corpus, --stage1-pairs, --stage2-corpus and --stage2-pairs go together");
  }
  if (a.stage1_corpus.empty()) {
    data = lb::make_demo_corpora(c.seed, a.pairs, a.vocab);
  } else {
    data.stage1 = load_stage(a.stage1_corpus, a.stage1_pairs, "");
    data.stage2 = load_stage(a.stage2_corpus, a.stage2_pairs, a.stage2_images);
  }
  const auto head = lb::initial_head(a.cfg);
  const auto r = lb::train_demo(data.stage1, data.stage2, head, a.cfg);
  const double random_init = lb::corpus_loss(data.stage2, head, a.cfg);
  if (!a.log.empty()) {
    auto out = open_out(a.log);
    for (const auto& line : r.log) out << line << '\n';
    close_out(out, a.log);
  }
  const double reduction = 1.0 - r.stage1.final_loss() / r.stage1.initial_loss();
  json j{{"seed", c.seed},
         {"tau", a.cfg.contrastive.tau},
         {"k_negatives", a.cfg.contrastive.k_negatives},
         {"percentage_threshold", a.cfg.contrastive.percentage_threshold},
         {"learning_rate", a.cfg.learning_rate},
         {"epochs", a.cfg.epochs},
         {"warm_start", a.cfg.warm_start},
         {"stage1", stage_json(r.stage1)},
         {"stage2", stage_json(r.stage2)},
         {"stage1_loss_reduction", reduction},
         {"stage2_initial_loss_random_init", random_init}};
  std::ostringstream text;
  for (const auto& line : r.log) text << line << '\n';
  text << "stage1 loss " << fixed(r.stage1.initial_loss(), 4) << " -> "
       << fixed(r.stage1.final_loss(), 4) << " (" << fixed(100 * reduction, 1) << "% lower)\n"
       << "stage2 initial loss " << fixed(r.stage2.initial_loss(), 4) << " ("
       << (a.cfg.warm_start ? "warm start" : "cold start") << "), random init "
       << fixed(random_init, 4) << '\n';
  emit(c, j, text.str());
  return kOk;
}

// --- cost model -----------------------------------------------------------

struct EstimateArgs {
  double seq = 1, docs = 1e6;
  std::size_t dim = 1;
  std::string precision = "fp16";
};

lb::CostScenario scenario_of(const EstimateArgs& a) {
  lb::CostScenario s;
  s.name = "cli";
  s.sequence_length = a.seq;
  s.dim = a.dim;
  s.precision = lb::parse_precision(a.precision);
  s.corpus_size = a.docs;
  s.validate();
  return s;
}

int run_estimate(const EstimateArgs& a, const Common& c) {
  const auto e = lb::storage_estimate(scenario_of(a));
  emit(c,
       {{"elements_per_doc", e.elements_per_doc}, {"bytes", e.bytes}, {"gib", e.gib},
        {"gib_rounded", lb::format_gib(e.gib)}},
       lb::format_gib(e.gib) + " GB\n");
  return kOk;
}

struct WhatIfArgs {
  EstimateArgs before;
  std::size_t project_dim = 0, pool_factor = 1;
  std::string to_precision;
};

int run_whatif(const WhatIfArgs& a, const Common& c) {
  const auto s = scenario_of(a.before);
  const auto r = lb::compression_whatif(
      s, a.project_dim ? a.project_dim : s.dim, a.pool_factor,
      a.to_precision.empty() ? s.precision : lb::parse_precision(a.to_precision));
  auto side = [](const lb::CostScenario& x, const lb::StorageEstimate& e) {
    return json{{"seq", x.sequence_length}, {"dim", x.dim},
                {"precision", lb::to_string(x.precision)}, {"elements_per_doc", e.elements_per_doc},
                {"gib", e.gib}};
  };
  std::ostringstream text;
  text << "before: seq " << r.before.sequence_length << ", dim " << r.before.dim << ", "
       << lb::to_string(r.before.precision) << " -> " << lb::format_gib(r.before_storage.gib)
       << " GB\n"
       << "after:  seq " << r.after.sequence_length << ", dim " << r.after.dim << ", "
       << lb::to_string(r.after.precision) << " -> " << lb::format_gib(r.after_storage.gib)
       << " GB\n"
       << "saved " << fixed(r.saved_percent, 1) << "%\n";
  emit(c,
       {{"before", side(r.before, r.before_storage)},
        {"after", side(r.after, r.after_storage)},
        {"saved_bytes", r.saved_bytes},
        {"saved_percent", r.saved_percent}},
       text.str());
  return kOk;
}

std::vector<lb::LatencyPoint> parse_points(const std::vector<std::string>& specs) {
  if (specs.empty()) return lb::published_latency_points();
  std::vector<lb::LatencyPoint> out;
  for (const auto& s : specs) {
    const auto colon = s.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(s);
      std::size_t used = 0;
      const double n = std::stod(s.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument(s);
      const double ms = std::stod(s.substr(colon + 1), &used);
      if (used != s.size() - colon - 1) throw std::invalid_argument(s);
      out.push_back({n, ms});
    } catch (const std::logic_error&) {
      throw lb::InvalidArgument("--point '" + s + "' is not CANDIDATES:MS");
    }
  }
  return out;
}

int run_fit(const std::vector<std::string>& specs, const std::vector<double>& predict,
            const Common& c) {
  const auto pts = parse_points(specs);
  const auto m = lb::fit_latency_model(pts);
  json residuals = json::array(), predictions = json::array();
  std::ostringstream text;
  text << "latency_ms = " << fixed(m.base_ms, 3) << " + " << fixed(m.per_candidate_ms, 4)
       << " * candidates\n";
  for (const auto& p : pts) {
    const double r = (m.predict(p.candidates) - p.ms) / p.ms;
    residuals.push_back({{"candidates", p.candidates}, {"ms", p.ms}, {"relative_residual", r}});
    text << "  n=" << p.candidates << " observed " << p.ms << " fitted "
         << fixed(m.predict(p.candidates), 1) << " (" << fixed(100 * r, 3) << "%)\n";
  }
  for (double n : predict) {
    predictions.push_back({{"candidates", n}, {"ms", m.predict(n)}});
    text << "  predict n=" << n << ": " << fixed(m.predict(n), 1) << " ms\n";
  }
  emit(c,
       {{"base_ms", m.base_ms},
        {"per_candidate_ms", m.per_candidate_ms},
        {"points", residuals},
        {"predictions", predictions}},
       text.str());
  return kOk;
}

int run_tradeoff(const std::string& scenarios, const std::vector<std::string>& points,
                 const std::string& sort, const Common& c) {
  const auto list = scenarios.empty() ? lb::published_scenarios() : lb::read_scenarios_file(scenarios);
  const auto model = lb::fit_latency_model(parse_points(points));
  const auto rows = lb::pipeline_tradeoff_report(list, model, lb::parse_tradeoff_sort(sort));
  json j = json::array();
  for (const auto& r : rows) {
    json row{{"name", r.scenario.name},
             {"seq", r.scenario.sequence_length},
             {"dim", r.scenario.dim},
             {"precision", lb::to_string(r.scenario.precision)},
             {"docs", r.scenario.corpus_size},
             {"elements_per_doc", r.storage.elements_per_doc},
             {"gib", r.storage.gib},
             {"added_latency_ms", r.added_latency_ms},
             {"accuracy", r.scenario.accuracy}};
    if (r.scenario.rerank_depth) row["rerank_depth"] = *r.scenario.rerank_depth;
    j.push_back(std::move(row));
  }
  std::ostringstream text;
  lb::write_tradeoff_table(text, rows);
  emit(c, j, text.str());
  return kOk;
}

// --- synth ----------------------------------------------------------------

int run_synth(const std::string& dir, lb::DistractorCorpusConfig cfg, const Common& c) {
  cfg.seed = c.seed;
  const auto corpus = lb::make_distractor_corpus(cfg);
  fs::create_directories(dir);
  const fs::path base(dir);
  auto docs = open_out(base / "corpus.tsv");
  lb::write_text_corpus(docs, corpus.documents);
  close_out(docs, base / "corpus.tsv");
  auto queries = open_out(base / "queries.tsv");
  lb::write_text_corpus(queries, corpus.queries);
  close_out(queries, base / "queries.tsv");
  auto qrels = open_out(base / "qrels.txt");
  lb::write_qrels(qrels, corpus.qrels);
  close_out(qrels, base / "qrels.txt");
  emit(c, {{"documents", corpus.documents.size()}, {"queries", corpus.queries.size()}, {"dir", dir}},
       "wrote " + std::to_string(corpus.documents.size()) + " documents and " +
           std::to_string(corpus.queries.size()) + " queries to " + dir + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latebench: late-interaction retrieval toolkit"};
  app.require_subcommand(1);
  std::map<const CLI::App*, Common> common;

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "Embed a text corpus (id<TAB>text) with the toy encoder");
  encode->add_option("--input", enc.input, "Text corpus")->required()->check(CLI::ExistingFile);
  encode->add_option("--output", enc.output, "Embedding JSON Lines file")->required();
  encode->add_option("--dim", enc.dim, "Embedding dimension")->check(CLI::Range(2, 1 << 16))->capture_default_str();
  encode->add_option("--max-tokens", enc.max_tokens, "Token limit per text")->check(CLI::PositiveNumber)->capture_default_str();
  encode->add_option("--pooling", enc.pooling, "Pool to one vector per text")->check(CLI::IsMember(kPoolings));
  add_seed(encode, common[encode], "the encoder");
  add_format(encode, common[encode]);

  IndexArgs idx;
  auto* index = app.add_subcommand("index", "Build an MVIX0001 index from embeddings");
  index->add_option("--input", idx.input, "Embedding JSON Lines file")->required()->check(CLI::ExistingFile);
  index->add_option("--output", idx.output, "Index file")->required();
  index->add_option("--mode", idx.mode)->check(CLI::IsMember(kModes))->capture_default_str();
  index->add_option("--precision", idx.precision)->check(CLI::IsMember(kPrecisions))->capture_default_str();
  add_format(index, common[index]);

  std::string stats_path;
  auto* stats = app.add_subcommand("stats", "Print index statistics");
  stats->add_option("--index", stats_path)->required()->check(CLI::ExistingFile);
  add_format(stats, common[stats]);

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Exact top-k search; writes a TREC run");
  search->add_option("--index", sa.index)->required()->check(CLI::ExistingFile);
  search->add_option("--queries", sa.queries, "Query embeddings")->required()->check(CLI::ExistingFile);
  search->add_option("--k", sa.k)->check(CLI::PositiveNumber)->capture_default_str();
  search->add_option("--kind", sa.kind)->check(CLI::IsMember(kKinds))->capture_default_str();
  search->add_option("--output", sa.output, "Run file (default: stdout)");
  search->add_option("--tag", sa.tag, "Run tag (default: index mode)");
  add_format(search, common[search]);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "nDCG@k of one or more runs, side by side");
  eval->add_option("--qrels", ea.qrels)->required()->check(CLI::ExistingFile);
  eval->add_option("--run", ea.runs, "Run file (repeatable)")->required()->check(CLI::ExistingFile);
  eval->add_option("--k", ea.k)->check(CLI::PositiveNumber)->capture_default_str();
  add_format(eval, common[eval]);

  MineArgs ma;
  auto* mine = app.add_subcommand("mine", "Select hard negatives for training pairs");
  mine->add_option("--corpus", ma.corpus, "Text corpus")->required()->check(CLI::ExistingFile);
  mine->add_option("--pairs", ma.pairs, "Training pairs (JSON Lines)")->required()->check(CLI::ExistingFile);
  mine->add_option("--output", ma.output)->required();
  mine->add_option("--representation", ma.representation)->check(CLI::IsMember({"pooled", "multi_vector"}))->capture_default_str();
  mine->add_option("--kind", ma.kind)->check(CLI::IsMember(kKinds))->capture_default_str();
  mine->add_option("--dim", ma.dim)->check(CLI::Range(2, 1 << 16))->capture_default_str();
  mine->add_option("--k-negatives", ma.contrastive.k_negatives)->capture_default_str();
  mine->add_option("--threshold", ma.contrastive.percentage_threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  add_seed(mine, common[mine], "the encoder");
  add_format(mine, common[mine]);

  TrainArgs ta;
  auto* train = app.add_subcommand("train-demo", "Two-stage contrastive training of a linear head");
  train->add_option("--stage1-corpus", ta.stage1_corpus)->check(CLI::ExistingFile);
  train->add_option("--stage1-pairs", ta.stage1_pairs)->check(CLI::ExistingFile);
  train->add_option("--stage2-corpus", ta.stage2_corpus)->check(CLI::ExistingFile);
  train->add_option("--stage2-pairs", ta.stage2_pairs)->check(CLI::ExistingFile);
  train->add_option("--stage2-images", ta.stage2_images, "Ids of image documents, one per line")->check(CLI::ExistingFile);
  train->add_option("--pairs", ta.pairs, "Synthetic pairs per stage")->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--vocab", ta.vocab, "Synthetic vocabulary size")->check(CLI::Range(10, 1 << 24))->capture_default_str();
  train->add_option("--epochs", ta.cfg.epochs)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--lr", ta.cfg.learning_rate)->check(CLI::NonNegativeNumber)->capture_default_str();
  train->add_option("--tau", ta.cfg.contrastive.tau)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--k-negatives", ta.cfg.contrastive.k_negatives)->capture_default_str();
  train->add_option("--threshold", ta.cfg.contrastive.percentage_threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  train->add_option("--dim", ta.cfg.dim)->check(CLI::Range(2, 1 << 16))->capture_default_str();
  train->add_option("--out-dim", ta.cfg.out_dim)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_flag("--cold-start", ta.cold, "Start stage 2 from the initial head");
  train->add_option("--log", ta.log, "Write the per-epoch log here");
  common[train].seed = 7;
  add_seed(train, common[train], "data, encoders and head");
  add_format(train, common[train]);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Index storage for one configuration");
  estimate->add_option("--seq", est.seq, "Embeddings per document")->required()->check(CLI::PositiveNumber);
  estimate->add_option("--dim", est.dim)->required()->check(CLI::PositiveNumber);
  estimate->add_option("--precision", est.precision)->check(CLI::IsMember(kPrecisions))->capture_default_str();
  estimate->add_option("--docs", est.docs)->check(CLI::NonNegativeNumber)->capture_default_str();
  add_format(estimate, common[estimate]);

  WhatIfArgs wa;
  auto* whatif = app.add_subcommand("whatif", "Storage saved by projection, late pooling and quantization");
  whatif->add_option("--seq", wa.before.seq)->required()->check(CLI::PositiveNumber);
  whatif->add_option("--dim", wa.before.dim)->required()->check(CLI::PositiveNumber);
  whatif->add_option("--precision", wa.before.precision)->check(CLI::IsMember(kPrecisions))->capture_default_str();
  whatif->add_option("--docs", wa.before.docs)->check(CLI::NonNegativeNumber)->capture_default_str();
  whatif->add_option("--project-dim", wa.project_dim, "Target dim (default: unchanged)")->check(CLI::PositiveNumber);
  whatif->add_option("--pool-factor", wa.pool_factor)->check(CLI::PositiveNumber)->capture_default_str();
  whatif->add_option("--to-precision", wa.to_precision)->check(CLI::IsMember(kPrecisions));
  add_format(whatif, common[whatif]);

  std::vector<std::string> fit_points;
  std::vector<double> fit_predict;
  auto* fit = app.add_subcommand("fit-latency", "Affine latency model from (candidates, ms) points");
  fit->add_option("--point", fit_points, "CANDIDATES:MS (default: the published reranker points)");
  fit->add_option("--predict", fit_predict, "Candidate counts to predict");
  add_format(fit, common[fit]);

  std::string tr_scenarios, tr_sort = "input";
  std::vector<std::string> tr_points;
  auto* tradeoff = app.add_subcommand("tradeoff", "Storage/latency/accuracy table over scenarios");
  tradeoff->add_option("--scenarios", tr_scenarios, "Scenario JSON Lines (default: published rows)")->check(CLI::ExistingFile);
  tradeoff->add_option("--point", tr_points, "Latency points CANDIDATES:MS");
  tradeoff->add_option("--sort", tr_sort)->check(CLI::IsMember({"input", "storage", "latency", "name"}))->capture_default_str();
  add_format(tradeoff, common[tradeoff]);

  std::string synth_dir;
  lb::DistractorCorpusConfig sc;
  auto* synth = app.add_subcommand("synth", "Write a token-distractor retrieval corpus");
  common[synth].seed = sc.seed;
  synth->add_option("--output-dir", synth_dir)->required();
  synth->add_option("--queries", sc.num_queries)->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--distractors", sc.distractors_per_query)->capture_default_str();
  synth->add_option("--doc-words", sc.doc_words)->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--query-words", sc.query_words)->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--vocab", sc.vocab_size)->check(CLI::PositiveNumber)->capture_default_str();
  add_seed(synth, common[synth], "the corpus");
  add_format(synth, common[synth]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*encode) return run_encode(enc, common[encode]);
    if (*index) return run_index(idx, common[index]);
    if (*stats) return run_stats(stats_path, common[stats]);
    if (*search) return run_search(sa, common[search]);
    if (*eval) return run_eval(ea, common[eval]);
    if (*mine) return run_mine(ma, common[mine]);
    if (*train) return run_train(ta, common[train]);
    if (*estimate) return run_estimate(est, common[estimate]);
    if (*whatif) return run_whatif(wa, common[whatif]);
    if (*fit) return run_fit(fit_points, fit_predict, common[fit]);
    if (*tradeoff) return run_tradeoff(tr_scenarios, tr_points, tr_sort, common[tradeoff]);
    if (*synth) return run_synth(synth_dir, sc, common[synth]);
  } catch (const lb::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const lb::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDiverged;
  } catch (const lb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kUsage;
}
