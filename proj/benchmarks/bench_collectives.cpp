// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "infhbd/collectives.hpp"

namespace {

void BM_BinaryExchangeSimulate(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  auto schedule = infhbd::binary_exchange_schedule(p, 1);
  for (auto _ : state) {
    auto states = infhbd::simulate_exchange(schedule);
    benchmark::DoNotOptimize(states.size());
  }
}
BENCHMARK(BM_BinaryExchangeSimulate)->RangeMultiplier(2)->Range(4, 64);

}  // namespace
