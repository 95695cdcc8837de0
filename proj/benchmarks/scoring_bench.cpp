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

#include <benchmark/benchmark.h>

#include "latebench/compression.hpp"
#include "latebench/encoder.hpp"
#include "latebench/pooling.hpp"
#include "latebench/rng.hpp"
#include "latebench/scoring.hpp"
#include "latebench/training.hpp"

namespace latebench {
namespace {

TokenMatrix random_matrix(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> v(rows * dim);
  for (double& x : v) x = rng.symmetric();
  return TokenMatrix::from_rows_normalized("m", rows, dim, v);
}

// Args: query rows, doc rows, dim.
void BM_MaxSim(benchmark::State& state) {
  const auto q = random_matrix(state.range(0), state.range(2), 1);
  const auto d = random_matrix(state.range(1), state.range(2), 2);
  for (auto _ : state) benchmark::DoNotOptimize(maxsim_score(q, d));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_MaxSim)->Args({32, 128, 128})->Args({32, 751, 128})->Args({32, 1290, 512});

void BM_BinaryMaxSim(benchmark::State& state) {
  const auto q = binary_quantize(random_matrix(state.range(0), state.range(2), 1));
  const auto d = binary_quantize(random_matrix(state.range(1), state.range(2), 2));
  for (auto _ : state) benchmark::DoNotOptimize(binary_maxsim_score(q, d));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_BinaryMaxSim)->Args({32, 128, 128})->Args({32, 751, 128})->Args({32, 1290, 512});

void BM_LatePool(benchmark::State& state) {
  const auto m = random_matrix(1802, 128, 3);
  for (auto _ : state) benchmark::DoNotOptimize(late_pool(m, state.range(0)));
}
BENCHMARK(BM_LatePool)->Arg(2)->Arg(4)->Arg(8);

void BM_EncodeText(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += "w" + std::to_string(i) + " ";
  const EncoderConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(encode_text(text, cfg));
}
BENCHMARK(BM_EncodeText)->Arg(16)->Arg(512);

void BM_InfoNceGradient(benchmark::State& state) {
  const auto m = random_matrix(2 + state.range(0), 32, 4);
  auto row = [&](std::size_t i, std::string id) {
    return PooledVector(std::move(id), m.row(i), Pooling::kMean);
  };
  PooledBatch b{row(0, "q"), row(1, "p"), {}};
  for (int i = 0; i < state.range(0); ++i) b.negatives.push_back(row(2 + i, "n" + std::to_string(i)));
  const auto head = LinearHead::random(32, 16, 5);
  const ContrastiveConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(info_nce_gradient(b, head, cfg));
}
BENCHMARK(BM_InfoNceGradient)->Arg(2)->Arg(16);

}  // namespace
}  // namespace latebench

BENCHMARK_MAIN();
