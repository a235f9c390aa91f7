// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace infhbd {

// Half-open fault interval [start, end) in opaque seconds.
struct FaultEvent {
  int node_id = 0;
  std::int64_t start = 0;
  std::int64_t end = 0;
};

// Immutable after construction. Overlapping events on one node are merged.
class FaultTimeline {
 public:
  FaultTimeline() = default;
  // horizon extends to the latest event end if the given value is smaller.
  FaultTimeline(std::vector<FaultEvent> events, int node_count,
                std::int64_t horizon = 0);

  int node_count() const { return node_count_; }
  std::int64_t horizon() const { return horizon_; }
  const std::vector<FaultEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }

  std::vector<int> faulty_nodes_at(std::int64_t t) const;
  int faulty_count_at(std::int64_t t) const;

  // Sorted unique event starts/ends; the faulty set is constant between
  // consecutive boundaries.
  std::vector<std::int64_t> boundaries() const;

  // Time-weighted mean and P99 of the faulty-node ratio over [0, horizon).
  double mean_faulty_ratio() const;
  double p99_faulty_ratio() const;

  double mean_event_duration() const;

  // Rewrites every event to last exactly the timeline's mean duration,
  // for fixed-repair-time simulations.
  FaultTimeline with_fixed_repair_duration() const;

 private:
  std::vector<FaultEvent> events_;  // merged, sorted by (node, start)
  int node_count_ = 0;
  std::int64_t horizon_ = 0;
};

// CSV with header "node_id,start,end", integer seconds. Rejects malformed
// rows, end <= start, and node ids outside [0, expected_nodes) with a
// line-numbered ParseError. expected_nodes < 0 infers the count from the data.
FaultTimeline load_trace(std::istream& in, int expected_nodes = -1);
FaultTimeline load_trace_file(const std::string& path, int expected_nodes = -1);
void save_trace(std::ostream& out, const FaultTimeline& timeline);

struct FaultModelParams {
  double p_gpu = 0.0;  // per-GPU i.i.d. fault probability
  int gpus_per_node = 4;

  double node_prob() const;  // P_s = 1 - (1 - p_gpu)^R
};

// Inverse pair: p = 1 - (1 - P_node)^(1/R) and P = 1 - (1 - p)^R.
double gpu_fault_prob_from_node(double p_node, int gpus_per_node);
double node_fault_prob(double p_gpu, int gpus_per_node);

// Inheritance probability used when splitting an 8-GPU-node trace into
// co-located 4-GPU nodes: P(half | whole) = (1 - sqrt(1 - P8)) / P8.
double split_inheritance_prob(double p8);

// Splits each node of an 8-GPU trace into two 4-GPU nodes at the same
// location; each child inherits each event independently with
// split_inheritance_prob(mean faulty ratio of the input trace).
FaultTimeline normalize_trace_8to4(const FaultTimeline& timeline,
                                   std::uint64_t seed);
// Same, with the inheritance probability forced (limit and property tests).
FaultTimeline normalize_trace_8to4(const FaultTimeline& timeline,
                                   std::uint64_t seed, double inherit_prob);

// Maps a trace recorded on a larger cluster onto `nodes` nodes: trace node i
// becomes node i mod nodes (faults are i.i.d., so the folding preserves the
// per-node statistics). The identity when the trace already fits.
FaultTimeline remap_trace_modulo(const FaultTimeline& timeline, int nodes);

// One-second timesteps; each node is independently faulty per step with
// probability params.node_prob().
FaultTimeline synthesize_trace(const FaultModelParams& params, int nodes,
                               int steps, std::uint64_t seed);
FaultTimeline synthesize_trace_node_prob(double node_prob, int nodes,
                                         int steps, std::uint64_t seed);

// Single-snapshot fault set. exact_count draws exactly round(ratio * n)
// distinct nodes; otherwise each node fails independently with `ratio`.
std::vector<int> sample_fault_set(int nodes, double ratio,
                                  std::mt19937_64& rng,
                                  bool exact_count = false);

}  // namespace infhbd
