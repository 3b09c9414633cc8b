// Copyright 2026 The HBS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "hbs/hll.hpp"
#include "hbs/huffman.hpp"
#include "hbs/rank_model.hpp"
#include "hbs/sketch.hpp"

namespace {

using hbs::HbsSketch;
using hbs::HllSketch;
using hbs::SketchParams;

HbsSketch filled(const SketchParams& p, std::uint64_t n, std::uint64_t seed, bool skip = false) {
  HbsSketch s(p, hbs::HbsOptions{0, skip});
  for (std::uint64_t i = 0; i < n; ++i) s.insert(hbs::seeded_hash(i, seed));
  return s;
}

void BM_HllInsert(benchmark::State& state) {
  HllSketch s(SketchParams::make(4096, 64));
  std::uint64_t i = 0;
  for (auto _ : state) s.insert(hbs::seeded_hash(i++, 1));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HllInsert);

// Steady state: the sketch already holds 10^6 elements, so most inserts stop
// at the bucket-minimum guard.
void BM_HbsInsert(benchmark::State& state) {
  const auto p = SketchParams::make(4096, static_cast<std::uint32_t>(state.range(0)));
  HbsSketch s = filled(p, 1000000, 1);
  std::uint64_t i = 1000000;
  for (auto _ : state) s.insert(hbs::seeded_hash(i++, 1));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HbsInsert)->Arg(16)->Arg(64)->Arg(256);

void BM_HbsInsertFromEmpty(benchmark::State& state) {
  const auto p = SketchParams::make(4096, 64);
  for (auto _ : state) {
    HbsSketch s(p);
    for (std::uint64_t i = 0; i < 100000; ++i) s.insert(hbs::seeded_hash(i, 2));
    benchmark::DoNotOptimize(s.estimate());
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_HbsInsertFromEmpty)->Unit(benchmark::kMillisecond);

void BM_HbsPeek(benchmark::State& state) {
  const auto b = static_cast<std::uint32_t>(state.range(0));
  const bool skip = state.range(1) != 0;
  const auto p = SketchParams::make(8192, b);
  const HbsSketch s = filled(p, 1000000, 3, skip);
  std::uint64_t i = 0;
  for (auto _ : state) {
    const auto a = hbs::split_hash(hbs::seeded_hash(i++, 4), p).address;
    benchmark::DoNotOptimize(s.peek(a));
  }
}
BENCHMARK(BM_HbsPeek)->Args({64, 0})->Args({313, 0})->Args({313, 1})->Args({1024, 0})->Args({1024, 1});

void BM_HbsMerge(benchmark::State& state) {
  const auto p = SketchParams::make(4096, 64);
  const HbsSketch a = filled(p, 500000, 5);
  const HbsSketch b = filled(p, 500000, 6);
  for (auto _ : state) benchmark::DoNotOptimize(HbsSketch::merge(a, b));
}
BENCHMARK(BM_HbsMerge)->Unit(benchmark::kMicrosecond);

void BM_CodebookBuild(benchmark::State& state) {
  double lambda = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hbs::HuffmanCodebook::build(hbs::RankModel(lambda)));
    lambda = lambda < 1e9 ? lambda * 1.01 : 1.0;
  }
}
BENCHMARK(BM_CodebookBuild);

void BM_HbsSerialize(benchmark::State& state) {
  const HbsSketch s = filled(SketchParams::make(4096, 64), 1000000, 7);
  for (auto _ : state) benchmark::DoNotOptimize(s.serialize());
}
BENCHMARK(BM_HbsSerialize)->Unit(benchmark::kMicrosecond);

void BM_HbsDeserialize(benchmark::State& state) {
  const auto bytes = filled(SketchParams::make(4096, 64), 1000000, 8).serialize();
  for (auto _ : state) benchmark::DoNotOptimize(HbsSketch::deserialize(bytes));
}
BENCHMARK(BM_HbsDeserialize)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
