// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "infhbd/faults.hpp"
#include "infhbd/orchestration.hpp"
#include "infhbd/rng.hpp"
#include "infhbd/topology.hpp"

namespace {

struct Scenario {
  infhbd::ClusterTopology topo;
  std::vector<int> faulty;
  infhbd::JobSpec job;
};

Scenario make_scenario(int n) {
  infhbd::ClusterConfig cfg;
  cfg.nodes = n;
  cfg.gpus_per_node = 4;
  cfg.k = 3;
  cfg.nodes_per_tor = 2;
  cfg.nodes_per_domain = 64;
  auto topo = infhbd::build_khop_topology(cfg);
  auto rng = infhbd::make_rng(7, n);
  auto faulty = infhbd::sample_fault_set(n, 0.05, rng, true);
  infhbd::JobSpec job;
  job.tp_size = 32;
  job.gpus_per_node = 4;
  job.job_scale = n * 4 / 2 / 32 * 32;
  return {std::move(topo), std::move(faulty), job};
}

void BM_OrchestrateDcnFree(benchmark::State& state) {
  auto s = make_scenario(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto scheme = infhbd::orchestrate_dcn_free(s.topo, s.faulty, 8);
    benchmark::DoNotOptimize(scheme.group_count());
  }
}
BENCHMARK(BM_OrchestrateDcnFree)->Range(1024, 16384);

void BM_OrchestrateFatTree(benchmark::State& state) {
  auto s = make_scenario(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto scheme = infhbd::orchestrate_fat_tree(s.topo, s.faulty, s.job);
    benchmark::DoNotOptimize(scheme.has_value());
  }
}
BENCHMARK(BM_OrchestrateFatTree)->Range(1024, 16384);

void BM_GreedyBaseline(benchmark::State& state) {
  auto s = make_scenario(static_cast<int>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto scheme =
        infhbd::orchestrate_greedy_baseline(s.topo, s.faulty, s.job, seed++);
    benchmark::DoNotOptimize(scheme.has_value());
  }
}
BENCHMARK(BM_GreedyBaseline)->Range(1024, 8192);

}  // namespace
