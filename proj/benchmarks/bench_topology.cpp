// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "infhbd/topology.hpp"

namespace {

infhbd::ClusterConfig config(int n, int k) {
  infhbd::ClusterConfig cfg;
  cfg.nodes = n;
  cfg.gpus_per_node = 4;
  cfg.k = k;
  cfg.nodes_per_tor = 2;
  cfg.nodes_per_domain = 64;
  return cfg;
}

void BM_BuildKhopTopology(benchmark::State& state) {
  auto cfg = config(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    auto topo = infhbd::build_khop_topology(cfg);
    benchmark::DoNotOptimize(topo.edges().size());
  }
}
BENCHMARK(BM_BuildKhopTopology)->Range(1024, 16384);

void BM_BuildDeployment(benchmark::State& state) {
  auto topo = infhbd::build_khop_topology(config(static_cast<int>(state.range(0)), 3));
  for (auto _ : state) {
    auto deploy = infhbd::build_deployment(topo);
    benchmark::DoNotOptimize(deploy.order.size());
  }
}
BENCHMARK(BM_BuildDeployment)->Range(1024, 16384);

}  // namespace
