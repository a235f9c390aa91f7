// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "infhbd/error.hpp"
#include "infhbd/orchestration.hpp"
#include "infhbd/topology.hpp"
#include "support/packing_oracle.hpp"

using namespace infhbd;

namespace {

ClusterConfig make_config(int n, int k, int r = 4, int p = 1, int d = -1,
                          bool ring = false) {
  ClusterConfig cfg;
  cfg.nodes = n;
  cfg.gpus_per_node = r;
  cfg.k = k;
  cfg.nodes_per_tor = p;
  cfg.nodes_per_domain = d < 0 ? p : d;
  cfg.ring_closed = ring;
  return cfg;
}

JobSpec make_job(int tp, int scale, int r = 4) {
  JobSpec job;
  job.tp_size = tp;
  job.job_scale = scale;
  job.gpus_per_node = r;
  return job;
}

void check_valid_placement(const PlacementScheme& scheme,
                           const std::vector<int>& faulty, int m) {
  std::set<int> seen, bad(faulty.begin(), faulty.end());
  for (const auto& g : scheme.groups) {
    CHECK(g.size() == static_cast<std::size_t>(m));
    for (int v : g) {
      CHECK(seen.insert(v).second);  // node-disjoint
      CHECK(bad.count(v) == 0);      // healthy
    }
  }
}

}  // namespace

TEST_CASE("dcn-free example: n=10 K=2 one fault bypassed") {
  auto topo = build_khop_topology(make_config(10, 2));
  auto scheme = orchestrate_dcn_free(topo, {4}, 2);
  std::vector<std::vector<int>> want = {{0, 1}, {2, 3}, {5, 6}, {7, 8}};
  CHECK(scheme.groups == want);
  check_valid_placement(scheme, {4}, 2);
}

TEST_CASE("dcn-free: healthy line places n/m groups") {
  auto topo = build_khop_topology(make_config(12, 2));
  auto scheme = orchestrate_dcn_free(topo, {}, 3);
  CHECK(scheme.group_count() == 4);
  CHECK(scheme.placed_nodes() == 12);
}

TEST_CASE("dcn-free: all nodes faulty gives an empty scheme") {
  auto topo = build_khop_topology(make_config(6, 2));
  std::vector<int> all = {0, 1, 2, 3, 4, 5};
  CHECK(orchestrate_dcn_free(topo, all, 2).groups.empty());
}

TEST_CASE("dcn-free matches the exhaustive packing oracle") {
  std::mt19937_64 rng(123);
  for (int n = 4; n <= 10; ++n) {
    for (int k = 1; k <= 3; ++k) {
      for (int m = 1; m <= 3; ++m) {
        for (bool ring : {false, true}) {
          if (ring && n < 2 * k + 1) continue;
          ClusterConfig cfg = make_config(n, k, 4, 1, 1, ring);
          auto topo = build_khop_topology(cfg);
          testing::PackingOracle oracle(n, k, m, ring);
          for (int trial = 0; trial < 20; ++trial) {
            std::vector<int> faulty;
            for (int v = 0; v < n; ++v)
              if (rng() % 4 == 0) faulty.push_back(v);
            std::uint32_t mask = oracle.full_mask();
            for (int f : faulty) mask &= ~(1u << f);
            auto scheme = orchestrate_dcn_free(topo, faulty, m);
            CHECK(scheme.group_count() == oracle.max_groups(mask));
            check_valid_placement(scheme, faulty, m);
          }
        }
      }
    }
  }
}

TEST_CASE("fat-tree n_constraints=0 equals dcn-free on the deployed order") {
  ClusterConfig cfg = make_config(12, 2, 4, 2, 4);
  auto topo = build_khop_topology(cfg);
  auto deploy = build_deployment(topo);
  auto job = make_job(8, 16);
  auto free_form = placement_fat_tree(deploy, 0, {3}, job);

  // Reference: components over deployed positions, groups popped in order.
  std::vector<int> healthy_positions;
  for (std::size_t pos = 0; pos < deploy.order.size(); ++pos)
    if (deploy.order[pos] != 3) healthy_positions.push_back(static_cast<int>(pos));
  std::vector<std::vector<int>> want;
  std::vector<int> run;
  auto flush = [&] {
    for (std::size_t at = 0; at + 2 <= run.size(); at += 2)
      want.push_back({deploy.order[run[at]], deploy.order[run[at + 1]]});
    run.clear();
  };
  for (int pos : healthy_positions) {
    if (!run.empty() && pos - run.back() > cfg.k) flush();
    run.push_back(pos);
  }
  flush();
  CHECK(free_form.groups == want);
}

TEST_CASE("fat-tree alignment expands a fault to its ToR block") {
  // One domain covering the whole cluster, full constraints.
  ClusterConfig cfg = make_config(8, 2, 4, 2, 8);
  auto topo = build_khop_topology(cfg);
  auto deploy = build_deployment(topo);
  auto job = make_job(8, 8);
  int full = fat_tree_max_constraints(topo);
  auto aligned = placement_fat_tree(deploy, full, {2}, job);
  // Node 2 is faulty; its ToR partner 3 is treated as faulty too.
  for (const auto& g : aligned.groups)
    for (int v : g) CHECK(v != 3);
  CHECK(aligned.placed_nodes() == 4);  // odd remainders strand one node per sub-line
  // Without the alignment constraint node 3 stays usable.
  auto relaxed = placement_fat_tree(deploy, full - 1, {2}, job);
  CHECK(relaxed.placed_nodes() == 6);
}

TEST_CASE("fat-tree full constraints on a healthy cluster use every node") {
  ClusterConfig cfg = make_config(16, 2, 4, 2, 8);
  auto topo = build_khop_topology(cfg);
  auto deploy = build_deployment(topo);
  auto job = make_job(8, 64);
  auto scheme = placement_fat_tree(deploy, fat_tree_max_constraints(topo), {}, job);
  CHECK(scheme.placed_nodes() == 16);
  // Slot-major order: sub-line twins are adjacent in the group list.
  for (int g = 0; g + 1 < scheme.group_count(); g += 2) {
    const auto& a = scheme.groups[g];
    const auto& b = scheme.groups[g + 1];
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(topo.tor_of(a[i]) == topo.tor_of(b[i]));
  }
}

TEST_CASE("fat-tree binary search returns the maximal constraint level") {
  ClusterConfig cfg = make_config(16, 2, 4, 2, 8);
  auto topo = build_khop_topology(cfg);
  auto job = make_job(8, 32);  // half the cluster
  auto scheme = orchestrate_fat_tree(topo, {}, job);
  REQUIRE(scheme.has_value());
  CHECK(scheme->constraint_level == fat_tree_max_constraints(topo));
}

TEST_CASE("fat-tree reports unsatisfiable jobs") {
  ClusterConfig cfg = make_config(8, 2, 4, 2, 4);
  auto topo = build_khop_topology(cfg);
  auto job = make_job(8, 32);  // wants every node
  std::vector<int> faulty = {0, 5};
  CHECK(!orchestrate_fat_tree(topo, faulty, job).has_value());
}

TEST_CASE("fat-tree satisfiability is non-increasing in n_constraints") {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 25; ++iter) {
    int p = 1 + static_cast<int>(rng() % 2);
    int doms = 1 + static_cast<int>(rng() % 3);
    int n = p * 4 * doms;
    ClusterConfig cfg = make_config(n, 2, 4, p, p * 4);
    auto topo = build_khop_topology(cfg);
    std::vector<int> faulty;
    for (int v = 0; v < n; ++v)
      if (rng() % 8 == 0) faulty.push_back(v);
    int healthy_gpus = (n - static_cast<int>(faulty.size())) * 4;
    int scale = healthy_gpus / 2 / 8 * 8;
    if (scale == 0) continue;
    auto profile = fat_tree_satisfiability_profile(topo, faulty, make_job(8, scale));
    for (std::size_t c = 1; c < profile.size(); ++c)
      CHECK(profile[c] <= profile[c - 1]);
  }
}

TEST_CASE("satisfiability profile agrees with materialized placements") {
  std::mt19937_64 rng(59);
  for (int iter = 0; iter < 15; ++iter) {
    int p = 1 + static_cast<int>(rng() % 2);
    int n = p * 8 * (1 + static_cast<int>(rng() % 3));
    ClusterConfig cfg = make_config(n, 2, 4, p, p * 4);
    auto topo = build_khop_topology(cfg);
    auto deploy = build_deployment(topo);
    std::vector<int> faulty;
    for (int v = 0; v < n; ++v)
      if (rng() % 6 == 0) faulty.push_back(v);
    auto job = make_job(8, (n - static_cast<int>(faulty.size())) * 4 / 2 / 8 * 8);
    if (job.job_scale == 0) continue;
    auto profile = fat_tree_satisfiability_profile(topo, faulty, job);
    for (int c = 0; c < static_cast<int>(profile.size()); ++c) {
      auto scheme = placement_fat_tree(deploy, c, faulty, job);
      bool satisfied =
          scheme.group_count() * 2 * 4 >= job.job_scale;  // m=2, r=4
      CHECK(satisfied == profile[c]);
    }
  }
}

TEST_CASE("greedy baseline is deterministic and valid") {
  ClusterConfig cfg = make_config(64, 3, 4, 2, 8);
  auto topo = build_khop_topology(cfg);
  auto job = make_job(8, 64);
  std::vector<int> faulty = {5, 17, 40};
  auto a = orchestrate_greedy_baseline(topo, faulty, job, 7);
  auto b = orchestrate_greedy_baseline(topo, faulty, job, 7);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(a->groups == b->groups);
  CHECK(a->group_count() == job.groups_needed());
  check_valid_placement(*a, faulty, 2);
  // Groups come out in physical order.
  for (int g = 0; g + 1 < a->group_count(); ++g)
    CHECK(a->groups[g][0] < a->groups[g + 1][0]);
}

TEST_CASE("greedy baseline reports unsatisfiable jobs") {
  ClusterConfig cfg = make_config(8, 2);
  auto topo = build_khop_topology(cfg);
  std::vector<int> faulty = {0, 1, 2};
  CHECK(!orchestrate_greedy_baseline(topo, faulty, make_job(8, 32), 1).has_value());
}

TEST_CASE("placement JSON carries groups, links, and constraint level") {
  auto topo = build_khop_topology(make_config(8, 2));
  auto scheme = orchestrate_dcn_free(topo, {}, 2);
  auto json = placement_to_json(scheme);
  CHECK(json.find("infhbd-placement-v1") != std::string::npos);
  CHECK(json.find("\"nodes\"") != std::string::npos);
  CHECK(json.find("\"links\"") != std::string::npos);
}

TEST_CASE("job spec validation") {
  CHECK_THROWS_AS(make_job(6, 12, 4).validate(), ConfigError);   // r does not divide t
  CHECK_THROWS_AS(make_job(8, 12, 4).validate(), ConfigError);   // t does not divide s
  CHECK_NOTHROW(make_job(8, 0, 4).validate());
}
