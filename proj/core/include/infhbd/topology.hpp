// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdlib>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace infhbd {

// Cluster shape. Node indices are 0-based throughout the library.
struct ClusterConfig {
  int nodes = 0;             // n, physical DCN order 0..n-1
  int gpus_per_node = 4;     // R
  int k = 2;                 // hop radius, one OCSTrx bundle per hop direction
  int nodes_per_tor = 1;     // p
  int nodes_per_domain = 1;  // d, aggregation-switch domain width
  bool ring_closed = false;  // close the line into a ring

  // Scenario architecture this cluster is evaluated as ("infhbd" or a
  // baseline kind); carried by the config file for simulation runs.
  std::string architecture = "infhbd";

  // Throws ConfigError when any invariant is violated:
  // 1 <= k <= gpus_per_node, nodes >= 2k+1 for a closed ring,
  // nodes_per_tor >= 1, nodes_per_domain a multiple of nodes_per_tor and <= n.
  void validate() const;
};

// Reads "key = value" lines; '#' starts a comment. Keys: nodes, gpus_per_node,
// k, nodes_per_tor, nodes_per_domain, ring_closed, architecture.
ClusterConfig load_cluster_config(std::istream& in);
ClusterConfig load_cluster_config_file(const std::string& path);

enum class EdgeRule {
  kHop,        // connect to nodes at distance 1..K
  kPowerOfTwo  // connect at distances 1, 2, 4, ..., 2^(K-1)
};

// Immutable after construction; safe to share across threads.
class ClusterTopology {
 public:
  ClusterTopology(ClusterConfig config, EdgeRule rule);

  const ClusterConfig& config() const { return config_; }
  int node_count() const { return config_.nodes; }
  int gpus_per_node() const { return config_.gpus_per_node; }
  int total_gpus() const { return config_.nodes * config_.gpus_per_node; }
  EdgeRule rule() const { return rule_; }

  bool has_edge(int u, int v) const;
  int degree(int v) const;
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  int tor_of(int v) const { return v / config_.nodes_per_tor; }
  int domain_of(int v) const { return v / config_.nodes_per_domain; }

  // Hop distances a node connects at (1..K, or powers of two).
  const std::vector<int>& hop_offsets() const { return offsets_; }

  template <typename F>
  void for_each_neighbor(int v, F&& f) const {
    const int n = config_.nodes;
    for (int off : offsets_) {
      if (config_.ring_closed) {
        int a = (v + off) % n;
        int b = (v - off % n + n) % n;
        f(a);
        if (b != a) f(b);
      } else {
        if (v + off < n) f(v + off);
        if (v - off >= 0) f(v - off);
      }
    }
  }

  // One "u v" pair per line, 0-based, u < v.
  void dump_edges(std::ostream& out) const;

 private:
  ClusterConfig config_;
  EdgeRule rule_;
  std::vector<int> offsets_;
  std::vector<std::pair<int, int>> edges_;
};

ClusterTopology build_khop_topology(const ClusterConfig& config);
ClusterTopology build_alltoall_topology(const ClusterConfig& config);

// Interleaved deployment: sub-line i holds physical nodes i, i+p, i+2p, ...
// Deployed positions are adjacent in the HBD sense when within K of each
// other; remainder nodes that do not fill a full sub-line column are dropped
// from the deployed order and kept in `dropped` for the relaxed placement
// stage.
struct DeployedTopology {
  ClusterConfig config;
  std::vector<int> order;    // position -> physical node id
  std::vector<int> pos_of;   // physical node id -> position, -1 if dropped
  std::vector<int> dropped;  // physical nodes outside the deployed order
  int sublines = 1;          // p
  int subline_length = 0;    // l = floor(n / p)

  bool positions_adjacent(int a, int b) const {
    return std::abs(a - b) <= config.k;
  }
};

DeployedTopology build_deployment(const ClusterTopology& topology);

// A GPU-level ring threaded through an ordered list of nodes. The two end
// nodes close the cycle over their internal loopback path.
struct GpuRing {
  std::vector<int> member_nodes;
  std::vector<std::pair<int, int>> gpu_order;        // (node, local rank)
  std::vector<std::pair<int, int>> activated_links;  // inter-node edges in use
  std::pair<int, int> loopback_nodes{-1, -1};        // line ends
};

// Throws InfeasibleRingError naming the first gap when a consecutive pair of
// nodes is not connected in the topology.
GpuRing form_ring(const std::vector<int>& nodes,
                  const ClusterTopology& topology);

// Same, but adjacency is positional in the deployed order.
GpuRing form_ring_deployed(const std::vector<int>& nodes,
                           const DeployedTopology& deploy);

// Ring from deployed positions directly (the orchestrator already works in
// position space); validates consecutive position gaps against K.
GpuRing form_ring_at_positions(const std::vector<int>& positions,
                               const DeployedTopology& deploy);

}  // namespace infhbd
