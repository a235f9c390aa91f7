// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "infhbd/faults.hpp"
#include "infhbd/orchestration.hpp"
#include "infhbd/topology.hpp"

namespace infhbd {

// One row per timestep. Conservation: faulty + wasted + placed = total GPUs.
struct MetricsReport {
  std::int64_t timestamp = 0;
  int faulty_gpus = 0;
  int wasted_gpus = 0;  // healthy but not covered by any group
  double waste_ratio = 0.0;
  int max_job_scale = 0;
  double cross_tor_fraction = 0.0;
};

// Healthy GPUs not covered by any group, over total GPUs.
double waste_ratio(const PlacementScheme& placement,
                   const ClusterTopology& topology,
                   const std::vector<int>& faulty);

// ((hbd_size - n_fault) mod tp_size) / hbd_size
double fragmentation_waste(int hbd_size, int n_fault, int tp_size);

// Largest job scale (multiple of tp_size) the healthy cluster can host:
// placeable groups times tp_size.
int max_job_scale(const ClusterTopology& topology,
                  const std::vector<int>& faulty, const JobSpec& job);

// Time during which max_job_scale < job scale, swept over event boundaries
// of the fixed-repair-duration timeline.
std::int64_t fault_waiting_time(const FaultTimeline& timeline,
                                const JobSpec& job,
                                const ClusterTopology& topology);

// Non-TP (DP/CP/PP) traffic model: the ordered group list is chunked into
// rings of nodes_per_tor consecutive groups; within each ring, every rank of
// a group exchanges a unit flow with the same rank of the next group.
// Returns the fraction of flows whose endpoints sit under different ToRs.
// An orchestrator that satisfies the alignment constraints emits rank-aligned
// groups as ring neighbors, which drives this to zero in the fault-free case.
double cross_tor_fraction(const PlacementScheme& placement,
                          const ClusterTopology& topology, const JobSpec& job);

// Calls fn once per constant-fault interval of the timeline.
void sweep_intervals(
    const FaultTimeline& timeline,
    const std::function<void(std::int64_t t0, std::int64_t t1,
                             const std::vector<int>& faulty)>& fn);

void write_metrics_csv(std::ostream& out,
                       const std::vector<MetricsReport>& rows);
std::vector<MetricsReport> read_metrics_csv(std::istream& in);

// JSON summary: mean/P50/P99 per metric plus total fault-waiting seconds.
std::string summarize_metrics(const std::vector<MetricsReport>& rows,
                              std::int64_t fault_waiting_seconds);

}  // namespace infhbd
