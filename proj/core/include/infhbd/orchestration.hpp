// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infhbd/topology.hpp"

namespace infhbd {

struct JobSpec {
  int tp_size = 0;        // t, GPUs per TP group
  int job_scale = 0;      // s, total GPUs requested
  int gpus_per_node = 4;  // r

  int nodes_per_group() const { return tp_size / gpus_per_node; }  // m
  int groups_needed() const { return tp_size ? job_scale / tp_size : 0; }

  // r | t, t | s, m >= 1; throws ConfigError.
  void validate() const;
};

// Ordered TP groups plus the ring threaded through each one. Group order is
// the DP-ring order used by the traffic metrics.
struct PlacementScheme {
  std::vector<std::vector<int>> groups;  // node ids, ring order, size m each
  std::vector<GpuRing> rings;            // parallel to groups
  int constraint_level = -1;             // n_constraints that produced it

  int group_count() const { return static_cast<int>(groups.size()); }
  int placed_nodes() const;
};

// Greedy placement over the healthy subgraph: connected components in HBD
// order, groups of m popped front to back. Runs in O(|S| + |E|).
PlacementScheme orchestrate_dcn_free(const ClusterTopology& topology,
                                     const std::vector<int>& faulty,
                                     int nodes_per_group);

// Constrained placement on the deployed order. The first n_align =
// max(0, n_constraints - n_maxsubline) domains expand every fault to its
// whole ToR block; the first min(n_maxsubline, n_constraints) sub-line
// segments are placed independently; leftover nodes go through an
// unconstrained pass. Aligned groups are emitted slot-major so that
// rank-aligned groups are DP neighbors.
PlacementScheme placement_fat_tree(const DeployedTopology& deploy,
                                   int n_constraints,
                                   const std::vector<int>& faulty,
                                   const JobSpec& job);

// Largest number of satisfied constraints whose placement still reaches the
// job scale, found by binary search (satisfiability is non-increasing in
// n_constraints). Empty optional when even n_constraints = 0 cannot host the
// job. O(n log n) overall.
std::optional<PlacementScheme> orchestrate_fat_tree(
    const ClusterTopology& topology, const std::vector<int>& faulty,
    const JobSpec& job);

int fat_tree_max_constraints(const ClusterTopology& topology);

// For tests: satisfiability at every constraint level, to check the
// monotonicity the binary search relies on.
std::vector<bool> fat_tree_satisfiability_profile(
    const ClusterTopology& topology, const std::vector<int>& faulty,
    const JobSpec& job);

// Baseline scheduler: draws random healthy nodes and keeps the first
// selection that forms enough K-hop-feasible groups. Groups are emitted in
// physical order. Bounded attempt budget; empty optional when exhausted.
std::optional<PlacementScheme> orchestrate_greedy_baseline(
    const ClusterTopology& topology, const std::vector<int>& faulty,
    const JobSpec& job, std::uint64_t seed);

inline constexpr int kGreedyAttemptBudget = 1000;

std::string placement_to_json(const PlacementScheme& scheme);

}  // namespace infhbd
