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

#include "latebench/train_demo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "latebench/error.hpp"
#include "latebench/pooling.hpp"
#include "latebench/rng.hpp"
#include "latebench/scoring.hpp"

namespace latebench {

std::vector<TrainingPair> read_training_pairs(std::istream& in) {
  using nlohmann::json;
  std::vector<TrainingPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where + "invalid JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("query") || !j["query"].is_string() ||
        !j.contains("positive_id") || !j["positive_id"].is_string()) {
      throw ParseError(where + "expected string fields 'query' and 'positive_id'");
    }
    TrainingPair p{j["query"].get<std::string>(), j["positive_id"].get<std::string>(), {}};
    if (j.contains("negative_ids")) {
      if (!j["negative_ids"].is_array()) {
        throw ParseError(where + "'negative_ids' must be an array of strings");
      }
      for (const auto& n : j["negative_ids"]) {
        if (!n.is_string()) {
          throw ParseError(where + "'negative_ids' must be an array of strings");
        }
        p.negative_ids.push_back(n.get<std::string>());
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<TrainingPair> read_training_pairs_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_training_pairs(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_training_pairs(std::ostream& out, const std::vector<TrainingPair>& pairs) {
  using nlohmann::json;
  for (const auto& p : pairs) {
    json j{{"query", p.query}, {"positive_id", p.positive_id}};
    if (!p.negative_ids.empty()) j["negative_ids"] = p.negative_ids;
    out << j.dump() << '\n';
  }
}

namespace {
constexpr std::size_t kStopwords = 8;
}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream) noexcept {
  return mix64(mix64(seed) ^ (static_cast<std::uint64_t>(stream) * 0x9e3779b97f4a7c15ULL));
}

TrainingCorpus make_training_corpus(std::size_t num_pairs, std::size_t vocab_size,
                                    double image_fraction, std::uint64_t seed) {
  constexpr std::size_t kDocWords = 10;
  constexpr std::size_t kDocStopwords = 6;
  constexpr std::size_t kQueryWords = 3;
  constexpr std::size_t kQueryStopwords = 2;
  if (num_pairs == 0 || vocab_size < kDocWords) {
    throw InvalidArgument("make_training_corpus: need pairs >= 1 and vocab >= 10");
  }
  SplitMix64 rng(seed);
  auto word = [](std::uint64_t i) { return "w" + std::to_string(i); };
  auto stopword = [&rng] { return "s" + std::to_string(rng.below(kStopwords)); };
  auto append = [](std::string& text, const std::string& w) {
    text += (text.empty() ? "" : " ") + w;
  };

  TrainingCorpus c;
  for (std::size_t d = 0; d < num_pairs; ++d) {
    std::vector<std::uint64_t> words;
    while (words.size() < kDocWords) {
      const auto w = rng.below(vocab_size);
      if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
    }
    std::string text;
    for (auto w : words) append(text, word(w));
    for (std::size_t i = 0; i < kDocStopwords; ++i) append(text, stopword());
    const std::string id = "d" + std::to_string(d);
    c.documents.push_back({id, text});
    if (rng.uniform() < image_fraction) c.image_ids.push_back(id);

    // A few of the document's words, one unrelated word, and stopwords.
    std::string query;
    for (std::size_t i = 0; i < kQueryWords; ++i) {
      append(query, word(words[rng.below(words.size())]));
    }
    append(query, word(rng.below(vocab_size)));
    for (std::size_t i = 0; i < kQueryStopwords; ++i) append(query, stopword());
    c.pairs.push_back({query, id, {}});
  }
  return c;
}

DemoCorpora make_demo_corpora(std::uint64_t seed, std::size_t pairs,
                              std::size_t vocab_size) {
  return {make_training_corpus(pairs, vocab_size, 0.0, derive_seed(seed, SeedStream::kStage1Data)),
          make_training_corpus(pairs, vocab_size, 0.5, derive_seed(seed, SeedStream::kStage2Data))};
}

LinearHead initial_head(const DemoConfig& cfg) {
  return LinearHead::random(cfg.dim, cfg.out_dim, derive_seed(cfg.seed, SeedStream::kHead));
}

namespace {

/// Pooled toy embeddings of one stage, encoded once.
struct StageData {
  std::vector<PooledVector> docs;
  std::unordered_map<std::string, std::size_t> doc_index;
  std::vector<PooledVector> queries;
  std::vector<std::size_t> positive;
  std::vector<std::vector<std::size_t>> pool;  // explicit candidates, or empty
};

StageData prepare(const TrainingCorpus& corpus, const DemoConfig& cfg) {
  if (corpus.documents.empty() || corpus.pairs.empty()) {
    throw InvalidArgument("training corpus needs documents and pairs");
  }
  const EncoderConfig text_cfg{cfg.dim, derive_seed(cfg.seed, SeedStream::kTextEncoder), 512};
  const EncoderConfig image_cfg{cfg.dim, derive_seed(cfg.seed, SeedStream::kImageEncoder), 512};
  const std::unordered_set<std::string> images(corpus.image_ids.begin(),
                                               corpus.image_ids.end());
  StageData s;
  for (const auto& d : corpus.documents) {
    TokenMatrix m = encode_text(d.text, text_cfg, d.id);
    if (images.count(d.id)) {
      const TokenMatrix visual = encode_text(d.text, image_cfg, d.id);
      std::vector<double> rows(m.values().begin(), m.values().end());
      rows.insert(rows.end(), visual.values().begin(), visual.values().end());
      m = TokenMatrix(d.id, m.rows() + visual.rows(), cfg.dim, std::move(rows), true);
    }
    if (!s.doc_index.emplace(d.id, s.docs.size()).second) {
      throw InvalidArgument("duplicate training document id '" + d.id + "'");
    }
    s.docs.push_back(mean_pool(m));
  }
  auto lookup = [&](const std::string& id) {
    auto it = s.doc_index.find(id);
    if (it == s.doc_index.end()) {
      throw InvalidArgument("training pair references unknown document '" + id + "'");
    }
    return it->second;
  };
  for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
    const auto& p = corpus.pairs[i];
    s.queries.push_back(encode_pooled(p.query, text_cfg, Pooling::kMean, "q" + std::to_string(i)));
    s.positive.push_back(lookup(p.positive_id));
    std::vector<std::size_t> pool;
    for (const auto& n : p.negative_ids) {
      if (n != p.positive_id) pool.push_back(lookup(n));
    }
    s.pool.push_back(std::move(pool));
  }
  return s;
}

struct EpochResult {
  double loss = 0.0;
  double mean_negatives = 0.0;
  std::vector<double> grad;
};

EpochResult run_epoch(const StageData& s, const LinearHead& head, const DemoConfig& cfg,
                      bool with_gradient) {
  std::vector<std::vector<double>> projected;
  projected.reserve(s.docs.size());
  for (const auto& d : s.docs) projected.push_back(head.apply(d.values()));

  EpochResult r;
  if (with_gradient) r.grad.assign(head.weights.size(), 0.0);
  for (std::size_t i = 0; i < s.queries.size(); ++i) {
    const auto q = head.apply(s.queries[i].values());
    const std::size_t pos = s.positive[i];

    std::vector<ScoredCandidate> candidates;
    auto add = [&](std::size_t d) {
      candidates.push_back({s.docs[d].id(), similarity(q, projected[d], cfg.kind)});
    };
    if (s.pool[i].empty()) {
      for (std::size_t d = 0; d < s.docs.size(); ++d) {
        if (d != pos) add(d);
      }
    } else {
      for (auto d : s.pool[i]) add(d);
    }
    const auto mined = select_hard_negatives(similarity(q, projected[pos], cfg.kind),
                                             std::move(candidates), cfg.contrastive);

    PooledBatch batch{s.queries[i], s.docs[pos], {}};
    for (const auto& m : mined) batch.negatives.push_back(s.docs[s.doc_index.at(m.id)]);
    r.mean_negatives += static_cast<double>(mined.size());

    if (with_gradient) {
      auto g = info_nce_gradient(batch, head, cfg.contrastive, cfg.kind);
      r.loss += g.loss;
      for (std::size_t k = 0; k < g.grad.size(); ++k) r.grad[k] += g.grad[k];
    } else {
      r.loss += head_loss(batch, head, cfg.contrastive, cfg.kind);
    }
  }
  const double n = static_cast<double>(s.queries.size());
  r.loss /= n;
  r.mean_negatives /= n;
  for (double& g : r.grad) g /= n;
  return r;
}

StageReport train_stage(const std::string& name, const StageData& s, LinearHead& head,
                        const DemoConfig& cfg, bool head_is_initial,
                        std::vector<std::string>& log) {
  StageReport report{name, {}};
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    EpochResult r;
    try {
      r = run_epoch(s, head, cfg, true);
    } catch (const InvalidArgument& e) {
      // The initial head was validated, so a failure after an update means the
      // weights have blown up (e.g. a projection norm overflowed).
      if (epoch == 0 && head_is_initial) throw;
      throw DivergenceError(name + " epoch " + std::to_string(epoch) + ": training diverged (" + e.what() + ")");
    }
    if (!std::isfinite(r.loss)) {
      throw DivergenceError(name + " epoch " + std::to_string(epoch) +
                            ": loss became non-finite (learning rate " +
                            std::to_string(cfg.learning_rate) + " too large?)");
    }
    const double gnorm = l2_norm(r.grad);
    report.epochs.push_back({epoch, r.loss, gnorm, r.mean_negatives});
    std::ostringstream line;
    line << name << " epoch=" << epoch << " loss=" << r.loss << " grad_norm=" << gnorm
         << " negatives=" << r.mean_negatives;
    log.push_back(line.str());
    for (std::size_t k = 0; k < head.weights.size(); ++k) {
      head.weights[k] -= cfg.learning_rate * r.grad[k];
    }
    for (double w : head.weights) {
      if (!std::isfinite(w)) {
        throw DivergenceError(name + " epoch " + std::to_string(epoch) +
                              ": weights became non-finite");
      }
    }
  }
  return report;
}

void validate(const DemoConfig& cfg, const LinearHead& head) {
  cfg.contrastive.validate();
  head.validate();
  if (head.in_dim != cfg.dim) {
    throw InvalidArgument("head input dim " + std::to_string(head.in_dim) +
                          " does not match encoder dim " + std::to_string(cfg.dim));
  }
  if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw InvalidArgument("learning rate must be a finite non-negative number");
  }
  if (cfg.epochs == 0) throw InvalidArgument("epochs must be >= 1");
}

}  // namespace

double corpus_loss(const TrainingCorpus& corpus, const LinearHead& head,
                   const DemoConfig& cfg) {
  validate(cfg, head);
  return run_epoch(prepare(corpus, cfg), head, cfg, false).loss;
}

TrainingReport train_demo(const TrainingCorpus& stage1, const TrainingCorpus& stage2,
                          const LinearHead& head, const DemoConfig& cfg) {
  validate(cfg, head);
  const StageData s1 = prepare(stage1, cfg);
  const StageData s2 = prepare(stage2, cfg);

  TrainingReport report;
  LinearHead w = head;
  report.stage1 = train_stage("stage1", s1, w, cfg, true, report.log);
  if (!cfg.warm_start) w = head;
  report.stage2 = train_stage("stage2", s2, w, cfg, !cfg.warm_start, report.log);
  report.head = std::move(w);
  return report;
}

}  // namespace latebench
