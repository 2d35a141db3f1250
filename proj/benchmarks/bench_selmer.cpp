// Copyright 2026 The selmer-ff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "selmer/census.hpp"
#include "selmer/field.hpp"
#include "selmer/lattice.hpp"
#include "selmer/lfunction.hpp"
#include "selmer/localdata.hpp"
#include "selmer/rng.hpp"
#include "selmer/unipoly.hpp"

using namespace selmer;

static void BM_FieldMul(benchmark::State& state) {
  const Field f = Field::make(5, static_cast<unsigned>(state.range(0)));
  SplitMix64 rng(1);
  Fq a = f.element(1 + rng.below(f.order() - 1));
  const Fq b = f.element(1 + rng.below(f.order() - 1));
  for (auto _ : state) {
    for (int i = 0; i < 1000; ++i) a = f.mul(f.add(a, b), b);
    benchmark::DoNotOptimize(a);
  }
  state.SetItemsProcessed(1000 * state.iterations());
}
BENCHMARK(BM_FieldMul)->Arg(1)->Arg(4)->Arg(8);

static void BM_Factor(benchmark::State& state) {
  const Field f = Field::make(7);
  SplitMix64 rng(2);
  std::vector<Fq> c;
  for (int64_t j = 0; j < state.range(0); ++j) c.push_back(f.element(rng.below(7)));
  c.push_back(f.one());
  const UniPoly p(f, c);
  for (auto _ : state) benchmark::DoNotOptimize(factor(p));
}
BENCHMARK(BM_Factor)->Arg(12)->Arg(24);

static void BM_GlobalSummary(benchmark::State& state) {
  const Field f = Field::make(7);
  SplitMix64 rng(3);
  const WeierstrassModel m = random_minimal_model(f, static_cast<unsigned>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(global_summary(m));
}
BENCHMARK(BM_GlobalSummary)->Arg(1)->Arg(2);

// Fibers over F_{5^e}; the log-domain loop starts at e = 2.
static void BM_SurfacePointCount(benchmark::State& state) {
  const WeierstrassModel m = seeded_smooth_model(Field::make(5), 1, 0);
  const auto e = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(surface_point_count(m, e));
}
BENCHMARK(BM_SurfacePointCount)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

static void BM_WeylE8(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(weyl_e8_orbits(n));
}
BENCHMARK(BM_WeylE8)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_CensusSample(benchmark::State& state) {
  CensusOptions o;
  o.samples = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_census(Field::make(5), 1, o));
  state.SetItemsProcessed(state.range(0) * state.iterations());
}
BENCHMARK(BM_CensusSample)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
