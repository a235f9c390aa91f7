// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace infhbd {

struct BoundParams {
  double p_s = 0.0;    // node fault probability
  int k = 2;           // hop radius
  int r = 4;           // GPUs per node
  int tp_size = 32;    // N_t, ring size in GPUs
  int nodes = 2000;    // N_s

  void validate() const;
};

struct BreakpointExpectation {
  double per_middle_node = 0.0;  // 2 (P_s^K + P_s^(2K))
  double cluster_bound = 0.0;    // N_s * per_middle_node
};

BreakpointExpectation breakpoint_expectation(const BoundParams& params);

// Closed-form upper bound on the expected waste ratio: 2 (N_t - R) P_s^K.
double waste_ratio_bound(const BoundParams& params);

struct MonteCarloWaste {
  double mean = 0.0;           // waste attributable to breakpoints (see below)
  double ci_half_width = 0.0;  // 95% normal-approximation half width
  double absolute_mean = 0.0;  // plain waste ratio, remainder included
  int trials = 0;
};

// Samples i.i.d. node faults at P_s on an N_s-node K-hop line and places
// rings of N_t/R nodes greedily. `mean` is the waste in excess of a
// fragmentation-only ideal holding the same fault count — the quantity the
// closed-form bound limits; `absolute_mean` keeps the tail remainder in.
MonteCarloWaste monte_carlo_waste(const BoundParams& params, int trials,
                                  std::uint64_t seed);

}  // namespace infhbd
