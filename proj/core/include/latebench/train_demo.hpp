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
#include <string>
#include <vector>

#include "latebench/encoder.hpp"
#include "latebench/training.hpp"

namespace latebench {

/// One line of a training pair file (JSON Lines):
///   {"query": "...", "positive_id": "d12", "negative_ids": ["d3", "d40"]}
/// negative_ids is optional; when present it replaces the whole corpus as the
/// candidate pool for mining.
struct TrainingPair {
  std::string query;
  std::string positive_id;
  std::vector<std::string> negative_ids;
};

/// Documents plus query/positive pairs for one training stage. Documents whose
/// id is listed in image_ids stand in for page images (see DemoConfig).
struct TrainingCorpus {
  std::vector<TextRecord> documents;
  std::vector<TrainingPair> pairs;
  std::vector<std::string> image_ids;
};

std::vector<TrainingPair> read_training_pairs(std::istream& in);
std::vector<TrainingPair> read_training_pairs_file(const std::filesystem::path& path);
void write_training_pairs(std::ostream& out, const std::vector<TrainingPair>& pairs);

struct DemoConfig {
  ContrastiveConfig contrastive;
  std::size_t dim = 32;        // toy encoder output
  std::size_t out_dim = 16;    // head output
  std::size_t epochs = 20;     // per stage
  double learning_rate = 0.05;
  std::uint64_t seed = 7;
  SimilarityKind kind = SimilarityKind::kDot;
  /// Stage 2 starts from the stage-1 weights when true, from the initial head
  /// otherwise.
  bool warm_start = true;
};

/// Independent sub-seed for a named purpose, so every random stream in the
/// demo derives from DemoConfig::seed.
enum class SeedStream : std::uint64_t {
  kTextEncoder = 1,
  kImageEncoder = 2,
  kHead = 3,
  kStage1Data = 4,
  kStage2Data = 5,
};
std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream) noexcept;

struct EpochRecord {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double grad_norm = 0.0;
  double mean_negatives = 0.0;
};

struct StageReport {
  std::string name;
  std::vector<EpochRecord> epochs;

  double initial_loss() const { return epochs.front().mean_loss; }
  double final_loss() const { return epochs.back().mean_loss; }
};

struct TrainingReport {
  StageReport stage1;
  StageReport stage2;
  LinearHead head;
  std::vector<std::string> log;
};

/// Synthetic stage corpus. Each document holds ten distinct content words
/// ("w<n>") and six draws from a fixed set of eight stopwords ("s0".."s7");
/// each query holds three of its positive's content words, one unrelated
/// content word and two stopwords. The stopwords are shared by every corpus,
/// which gives a head trained on one stage something to carry into the next.
/// With image_fraction > 0 about that share of documents is marked as images.
TrainingCorpus make_training_corpus(std::size_t num_pairs, std::size_t vocab_size,
                                    double image_fraction, std::uint64_t seed);

struct DemoCorpora {
  TrainingCorpus stage1;  // text only
  TrainingCorpus stage2;  // half the documents marked as images
};

/// The default demo data: `pairs` pairs per stage over a `vocab_size` word
/// vocabulary, seeded from the kStage1Data / kStage2Data streams of `seed`.
DemoCorpora make_demo_corpora(std::uint64_t seed, std::size_t pairs = 100,
                              std::size_t vocab_size = 1000);

/// Head drawn from the kHead stream of cfg.seed, cfg.dim -> cfg.out_dim.
LinearHead initial_head(const DemoConfig& cfg);

/// Two-stage contrastive training of a linear head with plain gradient
/// descent. Every epoch re-mines hard negatives with the current head, then
/// takes one full-batch step on the mean InfoNCE loss. The reported loss of an
/// epoch is measured before that epoch's step.
///
/// Text is encoded with the text-encoder seed. Image documents are encoded as
/// their words under the text seed followed by the same words under a
/// disjoint image-encoder seed, so they share a signal with text but carry a
/// second, modality-specific set of tokens.
///
/// Throws DivergenceError if a loss turns non-finite.
TrainingReport train_demo(const TrainingCorpus& stage1, const TrainingCorpus& stage2,
                          const LinearHead& head, const DemoConfig& cfg);

/// Mean mined-negative InfoNCE loss of `head` over a corpus, as measured at
/// the start of an epoch.
double corpus_loss(const TrainingCorpus& corpus, const LinearHead& head,
                   const DemoConfig& cfg);

}  // namespace latebench
