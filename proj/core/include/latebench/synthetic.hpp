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
#include <vector>

#include "latebench/encoder.hpp"
#include "latebench/eval.hpp"

namespace latebench {

struct DistractorCorpusConfig {
  std::size_t num_queries = 20;
  std::size_t distractors_per_query = 9;
  std::size_t doc_words = 12;
  std::size_t query_words = 3;
  std::size_t vocab_size = 5000;
  std::uint64_t seed = 42;
};

/// Text retrieval corpus with token-level distractors, plus queries and qrels.
struct RetrievalCorpus {
  std::vector<TextRecord> documents;
  std::vector<TextRecord> queries;
  Qrels qrels;
};

/// For every query a positive document of distinct vocabulary words is drawn.
/// The query holds `query_words` of those words, the first of which is the
/// key word. Each distractor copies the positive and swaps the key word for a
/// fresh one, so it shares every token with the positive but one. Only the
/// positive is judged relevant (grade 1). Document order is shuffled.
RetrievalCorpus make_distractor_corpus(const DistractorCorpusConfig& cfg);

}  // namespace latebench
