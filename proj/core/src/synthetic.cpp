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

#include "latebench/synthetic.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "latebench/error.hpp"
#include "latebench/rng.hpp"

namespace latebench {

RetrievalCorpus make_distractor_corpus(const DistractorCorpusConfig& cfg) {
  if (cfg.num_queries == 0 || cfg.doc_words == 0 || cfg.query_words == 0 ||
      cfg.query_words > cfg.doc_words) {
    throw InvalidArgument("distractor corpus: need 1 <= query_words <= doc_words");
  }
  const std::size_t needed =
      cfg.num_queries * (cfg.doc_words + cfg.distractors_per_query);
  if (cfg.vocab_size < needed) {
    throw InvalidArgument("distractor corpus: vocab_size must be >= " +
                          std::to_string(needed));
  }
  SplitMix64 rng(cfg.seed);
  auto word = [](std::uint64_t i) { return "t" + std::to_string(i); };

  // Each word is used by one query group only, so groups never interfere.
  std::unordered_set<std::uint64_t> used;
  auto fresh = [&] {
    std::uint64_t w = rng.below(cfg.vocab_size);
    while (!used.insert(w).second) w = rng.below(cfg.vocab_size);
    return w;
  };
  auto join = [&](const std::vector<std::uint64_t>& ws) {
    std::string s;
    for (auto w : ws) s += (s.empty() ? "" : " ") + word(w);
    return s;
  };

  RetrievalCorpus c;
  std::size_t next_doc = 0;
  for (std::size_t q = 0; q < cfg.num_queries; ++q) {
    std::vector<std::uint64_t> words(cfg.doc_words);
    for (auto& w : words) w = fresh();
    const std::size_t key = rng.below(cfg.doc_words);

    // Query: key word first, then other words of the positive.
    std::vector<std::uint64_t> query{words[key]};
    std::vector<std::uint64_t> rest;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i != key) rest.push_back(words[i]);
    }
    for (std::size_t i = 0; i + 1 < cfg.query_words; ++i) {
      const auto j = rng.below(rest.size());
      query.push_back(rest[j]);
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
    }

    const std::string qid = "q" + std::to_string(q);
    c.queries.push_back({qid, join(query)});
    const std::string pos_id = "doc" + std::to_string(next_doc++);
    c.documents.push_back({pos_id, join(words)});
    c.qrels.add(qid, pos_id, 1);

    for (std::size_t d = 0; d < cfg.distractors_per_query; ++d) {
      auto copy = words;
      copy[key] = fresh();
      const std::string id = "doc" + std::to_string(next_doc++);
      c.documents.push_back({id, join(copy)});
      c.qrels.add(qid, id, 0);
    }
  }
  // Fisher-Yates with the same generator.
  for (std::size_t i = c.documents.size(); i > 1; --i) {
    std::swap(c.documents[i - 1], c.documents[rng.below(i)]);
  }
  return c;
}

}  // namespace latebench
