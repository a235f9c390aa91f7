// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "infhbd/topology.hpp"

namespace infhbd {

struct TrafficParams {
  double batch = 1.0;      // b
  double seq_len = 1.0;    // s
  double hidden = 1.0;     // h
  int top_k = 1;           // k, MoE router topK
  int parallel_size = 1;   // n

  void validate() const;
};

// AllReduce volume per layer: 2bsh (n-1)/n.
double tp_allreduce_load(const TrafficParams& params);

// AllToAll volume per layer: 2bsh (n-1)/n * k/n. Smaller than the AllReduce
// load exactly when k < n.
double ep_alltoall_load(const TrafficParams& params);

// One pairwise exchange of round k: node `sender` sends blocks
// [block_lo, block_hi) of every origin it has heard from so far.
struct ExchangeTransfer {
  int sender = 0;
  int receiver = 0;
  int block_lo = 0;
  int block_hi = 0;
  std::int64_t units = 0;  // commset size * block span * block units
};

struct ExchangeRound {
  std::vector<ExchangeTransfer> transfers;
};

struct ExchangeSchedule {
  int group_size = 0;   // p, power of two
  int block_units = 0;  // m, units per block
  std::vector<ExchangeRound> rounds;  // log2(p) rounds
};

// Round k pairs node i with i XOR 2^(log2 p - k). Every node moves exactly
// p*m/2 units per round. Throws ConfigError unless p is a power of two >= 2.
ExchangeSchedule binary_exchange_schedule(int group_size, int block_units);

struct ExchangeState {
  int node = 0;
  std::vector<int> commset;                 // sorted
  std::vector<std::vector<char>> held;      // held[origin][block]
  std::vector<std::int64_t> sent_per_round;  // units
};

// Executes the schedule with (origin, block) sentinels; rounds are barriers.
// On completion every node holds block i of every origin.
std::vector<ExchangeState> simulate_exchange(const ExchangeSchedule& schedule);

// Blocks node i keeps after the exchange: [origin] -> its block i present.
std::vector<std::vector<char>> delivered_blocks(
    const std::vector<ExchangeState>& states);

// True when every transfer of every round runs over an edge of `topology`.
bool schedule_feasible(const ExchangeSchedule& schedule,
                       const ClusterTopology& topology);

// t_s log2 p + (1/2) t_w m p log2 p.
double exchange_cost(int group_size, double block_units, double setup_time,
                     double per_unit_time);

// Reference ring AllToAll for the asymptotic comparison: p-1 rounds of
// neighbor forwarding, cumulative volume m p (p-1) / 2 per node.
double ring_alltoall_cost(int group_size, double block_units,
                          double setup_time, double per_unit_time);

// Optional per-round reconfiguration latency added to the setup time.
inline constexpr double kFastSwitchLatencySeconds = 70e-6;

// TP_size * EP_size <= 64 for 4-GPU nodes, <= 2048 for 8-GPU nodes.
bool check_radix_constraint(int tp_size, int ep_size, int gpus_per_node);

}  // namespace infhbd
