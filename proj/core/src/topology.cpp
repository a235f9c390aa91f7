// SPDX-License-Identifier: Apache-2.0

#include "infhbd/topology.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "infhbd/error.hpp"

namespace infhbd {

void ClusterConfig::validate() const {
  if (nodes < 2) throw ConfigError("config: nodes must be >= 2");
  if (gpus_per_node < 1) throw ConfigError("config: gpus_per_node must be >= 1");
  if (k < 1 || k > gpus_per_node)
    throw ConfigError("config: k must satisfy 1 <= k <= gpus_per_node");
  if (ring_closed && nodes < 2 * k + 1)
    throw ConfigError("config: a closed ring needs nodes >= 2k+1");
  if (nodes_per_tor < 1) throw ConfigError("config: nodes_per_tor must be >= 1");
  if (nodes_per_domain < 1 || nodes_per_domain % nodes_per_tor != 0)
    throw ConfigError(
        "config: nodes_per_domain must be a positive multiple of nodes_per_tor");
  if (nodes_per_domain > nodes)
    throw ConfigError("config: nodes_per_domain must be <= nodes");
}

ClusterConfig load_cluster_config(std::istream& in) {
  ClusterConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, eq, value;
    if (!(ls >> key)) continue;
    if (!(ls >> eq >> value) || eq != "=") {
      std::ostringstream msg;
      msg << "config line " << lineno << ": expected 'key = value'";
      throw ParseError(msg.str());
    }
    try {
      if (key == "nodes") {
        cfg.nodes = std::stoi(value);
      } else if (key == "gpus_per_node") {
        cfg.gpus_per_node = std::stoi(value);
      } else if (key == "k") {
        cfg.k = std::stoi(value);
      } else if (key == "nodes_per_tor") {
        cfg.nodes_per_tor = std::stoi(value);
      } else if (key == "nodes_per_domain") {
        cfg.nodes_per_domain = std::stoi(value);
      } else if (key == "ring_closed") {
        cfg.ring_closed = (value == "true" || value == "1");
      } else if (key == "architecture") {
        cfg.architecture = value;
      } else {
        std::ostringstream msg;
        msg << "config line " << lineno << ": unknown key '" << key << "'";
        throw ParseError(msg.str());
      }
    } catch (const std::invalid_argument&) {
      std::ostringstream msg;
      msg << "config line " << lineno << ": bad value for '" << key << "'";
      throw ParseError(msg.str());
    }
  }
  cfg.validate();
  return cfg;
}

ClusterConfig load_cluster_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path);
  return load_cluster_config(in);
}

namespace {

std::vector<int> make_offsets(const ClusterConfig& cfg, EdgeRule rule) {
  std::vector<int> offsets;
  if (rule == EdgeRule::kHop) {
    for (int o = 1; o <= cfg.k; ++o) offsets.push_back(o);
  } else {
    for (int j = 0; j < cfg.k; ++j) offsets.push_back(1 << j);
  }
  return offsets;
}

}  // namespace

ClusterTopology::ClusterTopology(ClusterConfig config, EdgeRule rule)
    : config_(config), rule_(rule), offsets_(make_offsets(config, rule)) {
  config_.validate();
  if (rule == EdgeRule::kPowerOfTwo && offsets_.back() >= config_.nodes)
    throw ConfigError("config: 2^(k-1) must be smaller than nodes");

  const int n = config_.nodes;
  for (int u = 0; u < n; ++u) {
    for (int off : offsets_) {
      if (config_.ring_closed) {
        int v = (u + off) % n;
        int a = std::min(u, v), b = std::max(u, v);
        if (a != b) edges_.emplace_back(a, b);
      } else if (u + off < n) {
        edges_.emplace_back(u, u + off);
      }
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool ClusterTopology::has_edge(int u, int v) const {
  if (u == v) return false;
  int dist = std::abs(u - v);
  if (config_.ring_closed) dist = std::min(dist, config_.nodes - dist);
  return std::find(offsets_.begin(), offsets_.end(), dist) != offsets_.end();
}

int ClusterTopology::degree(int v) const {
  int deg = 0;
  for_each_neighbor(v, [&](int) { ++deg; });
  return deg;
}

void ClusterTopology::dump_edges(std::ostream& out) const {
  for (const auto& [u, v] : edges_) out << u << ' ' << v << '\n';
}

ClusterTopology build_khop_topology(const ClusterConfig& config) {
  return ClusterTopology(config, EdgeRule::kHop);
}

ClusterTopology build_alltoall_topology(const ClusterConfig& config) {
  return ClusterTopology(config, EdgeRule::kPowerOfTwo);
}

DeployedTopology build_deployment(const ClusterTopology& topology) {
  const ClusterConfig& cfg = topology.config();
  const int n = cfg.nodes;
  const int p = cfg.nodes_per_tor;
  if (p > n) throw ConfigError("deployment: nodes_per_tor exceeds nodes");
  const int l = n / p;
  if (l < 1) throw ConfigError("deployment: empty sub-lines");

  DeployedTopology deploy;
  deploy.config = cfg;
  deploy.sublines = p;
  deploy.subline_length = l;
  deploy.pos_of.assign(n, -1);
  deploy.order.reserve(static_cast<std::size_t>(p) * l);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < l; ++j) {
      int node = i + j * p;
      deploy.pos_of[node] = static_cast<int>(deploy.order.size());
      deploy.order.push_back(node);
    }
  }
  for (int v = p * l; v < n; ++v) deploy.dropped.push_back(v);
  return deploy;
}

namespace {

GpuRing thread_ring(const std::vector<int>& nodes, int gpus_per_node,
                    std::vector<std::pair<int, int>> links) {
  GpuRing ring;
  ring.member_nodes = nodes;
  ring.activated_links = std::move(links);
  ring.loopback_nodes = {nodes.front(), nodes.back()};
  ring.gpu_order.reserve(nodes.size() * gpus_per_node);
  for (int node : nodes)
    for (int rank = 0; rank < gpus_per_node; ++rank)
      ring.gpu_order.emplace_back(node, rank);
  return ring;
}

}  // namespace

GpuRing form_ring(const std::vector<int>& nodes,
                  const ClusterTopology& topology) {
  if (nodes.empty()) throw InfeasibleRingError("form_ring: empty node list");
  std::vector<std::pair<int, int>> links;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (!topology.has_edge(nodes[i], nodes[i + 1])) {
      std::ostringstream msg;
      msg << "form_ring: nodes " << nodes[i] << " and " << nodes[i + 1]
          << " are not within " << topology.config().k << " hops";
      throw InfeasibleRingError(msg.str());
    }
    links.emplace_back(nodes[i], nodes[i + 1]);
  }
  return thread_ring(nodes, topology.gpus_per_node(), std::move(links));
}

GpuRing form_ring_deployed(const std::vector<int>& nodes,
                           const DeployedTopology& deploy) {
  if (nodes.empty()) throw InfeasibleRingError("form_ring: empty node list");
  std::vector<std::pair<int, int>> links;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    int a = deploy.pos_of[nodes[i]];
    int b = deploy.pos_of[nodes[i + 1]];
    if (a < 0 || b < 0 || !deploy.positions_adjacent(a, b)) {
      std::ostringstream msg;
      msg << "form_ring: nodes " << nodes[i] << " and " << nodes[i + 1]
          << " are not deployed within " << deploy.config.k << " hops";
      throw InfeasibleRingError(msg.str());
    }
    links.emplace_back(nodes[i], nodes[i + 1]);
  }
  return thread_ring(nodes, deploy.config.gpus_per_node, std::move(links));
}

GpuRing form_ring_at_positions(const std::vector<int>& positions,
                               const DeployedTopology& deploy) {
  if (positions.empty()) throw InfeasibleRingError("form_ring: empty node list");
  std::vector<int> nodes;
  nodes.reserve(positions.size());
  std::vector<std::pair<int, int>> links;
  links.reserve(positions.size() - 1);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    nodes.push_back(deploy.order[positions[i]]);
    if (i == 0) continue;
    if (!deploy.positions_adjacent(positions[i - 1], positions[i])) {
      std::ostringstream msg;
      msg << "form_ring: positions " << positions[i - 1] << " and "
          << positions[i] << " are not within " << deploy.config.k << " hops";
      throw InfeasibleRingError(msg.str());
    }
    links.emplace_back(nodes[i - 1], nodes[i]);
  }
  return thread_ring(nodes, deploy.config.gpus_per_node, std::move(links));
}

}  // namespace infhbd
