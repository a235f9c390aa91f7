// SPDX-License-Identifier: Apache-2.0

#include "infhbd/analysis.hpp"

#include <cmath>
#include <vector>

#include "infhbd/error.hpp"
#include "infhbd/faults.hpp"
#include "infhbd/metrics.hpp"
#include "infhbd/orchestration.hpp"
#include "infhbd/parallel.hpp"
#include "infhbd/rng.hpp"
#include "infhbd/topology.hpp"

namespace infhbd {

void BoundParams::validate() const {
  if (p_s < 0.0 || p_s > 1.0) throw ConfigError("bound: need 0 <= P_s <= 1");
  if (k < 1) throw ConfigError("bound: need K >= 1");
  if (r < 1) throw ConfigError("bound: need R >= 1");
  if (tp_size < r || tp_size % r != 0)
    throw ConfigError("bound: N_t must be a multiple of R, N_t >= R");
  if (nodes < 1) throw ConfigError("bound: need N_s >= 1");
}

BreakpointExpectation breakpoint_expectation(const BoundParams& params) {
  params.validate();
  double pk = std::pow(params.p_s, params.k);
  double per_node = 2.0 * (pk + pk * pk);
  return {per_node, params.nodes * per_node};
}

double waste_ratio_bound(const BoundParams& params) {
  params.validate();
  return 2.0 * (params.tp_size - params.r) * std::pow(params.p_s, params.k);
}

MonteCarloWaste monte_carlo_waste(const BoundParams& params, int trials,
                                  std::uint64_t seed) {
  params.validate();
  if (trials < 1) throw ConfigError("monte_carlo_waste: trials must be >= 1");

  ClusterConfig cfg;
  cfg.nodes = params.nodes;
  cfg.gpus_per_node = params.r;
  cfg.k = params.k;
  cfg.ring_closed = false;  // the derivation is for the line topology
  auto topology = build_khop_topology(cfg);
  const int m = params.tp_size / params.r;

  std::vector<double> excess(trials, 0.0), absolute(trials, 0.0);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t trial) {
    auto rng = make_rng(seed, trial);
    auto faulty = sample_fault_set(params.nodes, params.p_s, rng);
    auto scheme = orchestrate_dcn_free(topology, faulty, m);
    int healthy = params.nodes - static_cast<int>(faulty.size());
    int wasted_nodes = healthy - scheme.placed_nodes();
    int ideal_remainder = healthy % m;
    excess[trial] = static_cast<double>(wasted_nodes - ideal_remainder) /
                    static_cast<double>(params.nodes);
    absolute[trial] =
        static_cast<double>(wasted_nodes) / static_cast<double>(params.nodes);
  });

  MonteCarloWaste out;
  out.trials = trials;
  double sum = 0.0, sum_abs = 0.0;
  for (int i = 0; i < trials; ++i) {
    sum += excess[i];
    sum_abs += absolute[i];
  }
  out.mean = sum / trials;
  out.absolute_mean = sum_abs / trials;
  double var = 0.0;
  for (int i = 0; i < trials; ++i)
    var += (excess[i] - out.mean) * (excess[i] - out.mean);
  var = trials > 1 ? var / (trials - 1) : 0.0;
  out.ci_half_width = 1.96 * std::sqrt(var / trials);
  return out;
}

}  // namespace infhbd
