// SPDX-License-Identifier: Apache-2.0

#include "infhbd/orchestration.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <tuple>

#include "json.hpp"

#include "infhbd/error.hpp"
#include "infhbd/rng.hpp"

namespace infhbd {

void JobSpec::validate() const {
  if (gpus_per_node < 1) throw ConfigError("job: gpus_per_node must be >= 1");
  if (tp_size < 1 || tp_size % gpus_per_node != 0)
    throw ConfigError("job: tp_size must be a positive multiple of gpus_per_node");
  if (job_scale < 0 || job_scale % tp_size != 0)
    throw ConfigError("job: job_scale must be a non-negative multiple of tp_size");
}

int PlacementScheme::placed_nodes() const {
  int total = 0;
  for (const auto& g : groups) total += static_cast<int>(g.size());
  return total;
}

namespace {

// Connected components of the healthy subgraph, each returned in HBD path
// order. Components come out sorted by their smallest member.
std::vector<std::vector<int>> healthy_components(
    const ClusterTopology& topology, const std::vector<char>& healthy) {
  const int n = topology.node_count();
  std::vector<char> visited(n, 0);
  std::vector<std::vector<int>> components;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (!healthy[s] || visited[s]) continue;
    std::vector<int> comp;
    stack.push_back(s);
    visited[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      topology.for_each_neighbor(u, [&](int v) {
        if (healthy[v] && !visited[v]) {
          visited[v] = 1;
          stack.push_back(v);
        }
      });
    }
    std::sort(comp.begin(), comp.end());
    if (topology.config().ring_closed && comp.size() > 1) {
      // A component that wraps around the ring is cut at its largest
      // circular gap so that consecutive members stay within K hops.
      const int count = static_cast<int>(comp.size());
      int cut = 0, widest = -1;
      for (int i = 0; i < count; ++i) {
        int next = comp[(i + 1) % count] - comp[i];
        if (next < 0) next += n;
        if (next > widest) {
          widest = next;
          cut = (i + 1) % count;
        }
      }
      std::rotate(comp.begin(), comp.begin() + cut, comp.end());
    }
    components.push_back(std::move(comp));
  }
  return components;
}

std::vector<std::vector<int>> pop_groups(std::vector<std::vector<int>>& comps,
                                         int m) {
  std::vector<std::vector<int>> groups;
  for (auto& comp : comps) {
    std::size_t at = 0;
    while (comp.size() - at >= static_cast<std::size_t>(m)) {
      groups.emplace_back(comp.begin() + at, comp.begin() + at + m);
      at += m;
    }
  }
  return groups;
}

std::vector<char> healthy_flags(int n, const std::vector<int>& faulty) {
  std::vector<char> healthy(n, 1);
  for (int f : faulty)
    if (f >= 0 && f < n) healthy[f] = 0;
  return healthy;
}

}  // namespace

PlacementScheme orchestrate_dcn_free(const ClusterTopology& topology,
                                     const std::vector<int>& faulty,
                                     int nodes_per_group) {
  if (nodes_per_group < 1)
    throw ConfigError("orchestrate_dcn_free: nodes_per_group must be >= 1");
  auto healthy = healthy_flags(topology.node_count(), faulty);
  auto comps = healthy_components(topology, healthy);
  PlacementScheme scheme;
  scheme.groups = pop_groups(comps, nodes_per_group);
  scheme.rings.reserve(scheme.groups.size());
  for (const auto& g : scheme.groups) scheme.rings.push_back(form_ring(g, topology));
  return scheme;
}

namespace {

struct KeyedGroup {
  std::tuple<int, int, int, int> key;  // (stage, domain, column, subline)
  std::vector<int> members;            // deployed positions, or physical ids
  bool deployed_adjacency = true;      // false for the dropped-node pool
};

struct FatTreeShape {
  int seg_len = 0;               // l = d / p, positions per segment
  int segments_per_subline = 0;  // full segments along one sub-line
  int total_segments = 0;        // n_maxsubline
  int n_domain = 0;
};

FatTreeShape fat_tree_shape(const ClusterConfig& cfg,
                            const DeployedTopology& deploy) {
  FatTreeShape shape;
  shape.seg_len = std::max(1, cfg.nodes_per_domain / cfg.nodes_per_tor);
  shape.segments_per_subline = deploy.subline_length / shape.seg_len;
  shape.total_segments = deploy.sublines * shape.segments_per_subline;
  shape.n_domain = cfg.nodes / cfg.nodes_per_domain;
  return shape;
}

}  // namespace

int fat_tree_max_constraints(const ClusterTopology& topology) {
  auto deploy = build_deployment(topology);
  auto shape = fat_tree_shape(topology.config(), deploy);
  return shape.n_domain + shape.total_segments;
}

namespace {

// Shared walk behind both the counting probe and the materializing
// placement, so the binary search and the returned scheme cannot diverge.
// Emits each group as (stage, domain, column, subline, positions-or-nodes).
template <typename Emit>
void scan_fat_tree_groups(const DeployedTopology& deploy, int n_constraints,
                          const std::vector<int>& faulty, int m, Emit&& emit) {
  const ClusterConfig& cfg = deploy.config;
  const int n = cfg.nodes;
  const int p = cfg.nodes_per_tor;
  const auto shape = fat_tree_shape(cfg, deploy);

  if (n_constraints < 0 || n_constraints > shape.n_domain + shape.total_segments)
    throw ConfigError("placement_fat_tree: n_constraints out of range");

  const int n_align =
      std::min(std::max(0, n_constraints - shape.total_segments),
               std::min(shape.n_domain, shape.segments_per_subline));
  const int n_subline = std::min(shape.total_segments, n_constraints);

  auto original = healthy_flags(n, faulty);

  // TP group alignment: in the first n_align domains a fault brings down the
  // whole ToR block, so parallel sub-lines break at identical columns.
  std::vector<char> aligned = original;
  for (int g = 0; g < n_align; ++g) {
    int lo = g * cfg.nodes_per_domain;
    int hi = std::min(n, lo + cfg.nodes_per_domain);
    for (int x = lo; x < hi; ++x) {
      if (original[x]) continue;
      int block = x / p * p;
      for (int y = block; y < std::min(n, block + p); ++y) aligned[y] = 0;
    }
  }
  auto is_healthy = [&](int node) {
    return node / cfg.nodes_per_domain < n_align ? aligned[node] != 0
                                                 : original[node] != 0;
  };

  std::vector<int> run;
  run.reserve(m);

  // Segment-contained placement: TP groups stay within one (sub-line, domain)
  // slice, so they never span aggregation domains or sub-line seams.
  for (int seg = 0; seg < n_subline; ++seg) {
    int subline = seg / shape.segments_per_subline;
    int domain = seg % shape.segments_per_subline;
    int base = subline * deploy.subline_length + domain * shape.seg_len;
    run.clear();
    int prev = -1;
    for (int off = 0; off < shape.seg_len; ++off) {
      int pos = base + off;
      if (!is_healthy(deploy.order[pos])) continue;
      if (prev >= 0 && pos - prev > cfg.k) run.clear();
      prev = pos;
      run.push_back(pos);
      if (static_cast<int>(run.size()) == m) {
        emit(0, domain, run.front() % deploy.subline_length, subline, run,
             true);
        run.clear();
      }
    }
  }

  // Unconstrained pass over whatever the segments did not claim.
  auto in_segment = [&](int pos) {
    int subline = pos / deploy.subline_length;
    int offset = pos % deploy.subline_length;
    int domain = offset / shape.seg_len;
    if (domain >= shape.segments_per_subline) return false;
    return subline * shape.segments_per_subline + domain < n_subline;
  };
  run.clear();
  int prev = -1;
  for (int pos = 0; pos < static_cast<int>(deploy.order.size()); ++pos) {
    if (in_segment(pos) || !is_healthy(deploy.order[pos])) continue;
    if (prev >= 0 && pos - prev > cfg.k) run.clear();
    prev = pos;
    run.push_back(pos);
    if (static_cast<int>(run.size()) == m) {
      emit(1, run.front(), 0, 0, run, true);
      run.clear();
    }
  }

  // Nodes dropped by the deployment flooring re-enter here only. They keep
  // their physical wiring, so adjacency is physical, not positional.
  run.clear();
  prev = -1;
  for (int v : deploy.dropped) {
    if (!is_healthy(v)) continue;
    if (prev >= 0 && v - prev > cfg.k) run.clear();
    prev = v;
    run.push_back(v);
    if (static_cast<int>(run.size()) == m) {
      emit(2, run.front(), 0, 0, run, false);
      run.clear();
    }
  }
}

int count_fat_tree_groups(const DeployedTopology& deploy, int n_constraints,
                          const std::vector<int>& faulty, int m) {
  int count = 0;
  scan_fat_tree_groups(deploy, n_constraints, faulty, m,
                       [&](int, int, int, int, const std::vector<int>&, bool) {
                         ++count;
                       });
  return count;
}

}  // namespace

PlacementScheme placement_fat_tree(const DeployedTopology& deploy,
                                   int n_constraints,
                                   const std::vector<int>& faulty,
                                   const JobSpec& job) {
  job.validate();
  const ClusterConfig& cfg = deploy.config;
  const int m = job.nodes_per_group();

  std::vector<KeyedGroup> keyed;
  scan_fat_tree_groups(
      deploy, n_constraints, faulty, m,
      [&](int stage, int domain, int col, int subline,
          const std::vector<int>& members, bool deployed_adjacency) {
        KeyedGroup kg;
        kg.key = {stage, domain, col, subline};
        kg.deployed_adjacency = deployed_adjacency;
        kg.members = members;
        keyed.push_back(std::move(kg));
      });

  std::sort(keyed.begin(), keyed.end(),
            [](const KeyedGroup& a, const KeyedGroup& b) { return a.key < b.key; });

  PlacementScheme scheme;
  scheme.constraint_level = n_constraints;
  scheme.groups.reserve(keyed.size());
  scheme.rings.reserve(keyed.size());
  std::optional<ClusterTopology> physical;
  for (auto& kg : keyed) {
    if (kg.deployed_adjacency) {
      scheme.rings.push_back(form_ring_at_positions(kg.members, deploy));
      for (int& member : kg.members) member = deploy.order[member];
    } else {
      if (!physical) physical = build_khop_topology(cfg);
      scheme.rings.push_back(form_ring(kg.members, *physical));
    }
    scheme.groups.push_back(std::move(kg.members));
  }
  return scheme;
}

std::optional<PlacementScheme> orchestrate_fat_tree(
    const ClusterTopology& topology, const std::vector<int>& faulty,
    const JobSpec& job) {
  job.validate();
  auto deploy = build_deployment(topology);
  const int m = job.nodes_per_group();
  auto enough = [&](int groups) {
    return static_cast<long long>(groups) * m * job.gpus_per_node >=
           job.job_scale;
  };
  // Probes only count groups; the scheme is materialized once at the level
  // the search settles on.
  int low = 0;
  int high = fat_tree_max_constraints(topology);
  int best = -1;
  while (low <= high) {
    int mid = (low + high) / 2;
    if (enough(count_fat_tree_groups(deploy, mid, faulty, m))) {
      best = mid;
      low = mid + 1;
    } else {
      high = mid - 1;
    }
  }
  if (best < 0) return std::nullopt;
  return placement_fat_tree(deploy, best, faulty, job);
}

std::vector<bool> fat_tree_satisfiability_profile(
    const ClusterTopology& topology, const std::vector<int>& faulty,
    const JobSpec& job) {
  auto deploy = build_deployment(topology);
  const int m = job.nodes_per_group();
  int max_c = fat_tree_max_constraints(topology);
  std::vector<bool> profile;
  profile.reserve(max_c + 1);
  for (int c = 0; c <= max_c; ++c)
    profile.push_back(
        static_cast<long long>(count_fat_tree_groups(deploy, c, faulty, m)) *
            m * job.gpus_per_node >=
        job.job_scale);
  return profile;
}

std::optional<PlacementScheme> orchestrate_greedy_baseline(
    const ClusterTopology& topology, const std::vector<int>& faulty,
    const JobSpec& job, std::uint64_t seed) {
  job.validate();
  const int m = job.nodes_per_group();
  const int want_groups = job.groups_needed();
  auto healthy = healthy_flags(topology.node_count(), faulty);
  std::vector<int> pool;
  for (int v = 0; v < topology.node_count(); ++v)
    if (healthy[v]) pool.push_back(v);

  const int need_nodes = want_groups * m;
  if (need_nodes > static_cast<int>(pool.size())) return std::nullopt;

  auto rng = make_rng(seed);
  for (int attempt = 0; attempt < kGreedyAttemptBudget; ++attempt) {
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int> picked(pool.begin(), pool.begin() + need_nodes);
    std::sort(picked.begin(), picked.end());

    // The random selection is accepted only if, read in HBD order, it splits
    // into enough within-K consecutive groups.
    std::vector<char> subset(topology.node_count(), 0);
    for (int v : picked) subset[v] = 1;
    auto comps = healthy_components(topology, subset);
    auto groups = pop_groups(comps, m);
    if (static_cast<int>(groups.size()) < want_groups) continue;

    groups.resize(want_groups);
    std::sort(groups.begin(), groups.end());
    PlacementScheme scheme;
    scheme.groups = std::move(groups);
    scheme.rings.reserve(scheme.groups.size());
    for (const auto& g : scheme.groups)
      scheme.rings.push_back(form_ring(g, topology));
    return scheme;
  }
  return std::nullopt;
}

std::string placement_to_json(const PlacementScheme& scheme) {
  nlohmann::json j;
  j["schema"] = "infhbd-placement-v1";
  j["constraint_level"] = scheme.constraint_level;
  j["groups"] = nlohmann::json::array();
  for (std::size_t i = 0; i < scheme.groups.size(); ++i) {
    nlohmann::json g;
    g["nodes"] = scheme.groups[i];
    auto links = nlohmann::json::array();
    for (const auto& [a, b] : scheme.rings[i].activated_links)
      links.push_back({a, b});
    g["links"] = std::move(links);
    j["groups"].push_back(std::move(g));
  }
  return j.dump(2);
}

}  // namespace infhbd
