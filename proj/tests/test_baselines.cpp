// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <vector>

#include "doctest.h"
#include "infhbd/baselines.hpp"
#include "infhbd/error.hpp"

using namespace infhbd;

namespace {

// All GPUs of the given nodes, R GPUs per node.
std::vector<int> node_faults_to_gpus(const std::vector<int>& nodes, int r) {
  std::vector<int> gpus;
  for (int v : nodes)
    for (int g = 0; g < r; ++g) gpus.push_back(v * r + g);
  return gpus;
}

}  // namespace

TEST_CASE("big switch has no waste when the cluster divides evenly") {
  auto spec = make_baseline("big_switch", 32);
  CHECK(baseline_waste(spec, 2880, {}, 32) == 0.0);
  CHECK(baseline_waste(spec, 2880, {0, 1, 2, 3}, 32) ==
        doctest::Approx(28.0 / 2880.0));
}

TEST_CASE("NVL-36 wastes at least 11% under TP-16 with a fault") {
  auto spec = make_baseline("nvl36", 16);
  double waste = baseline_waste(spec, 36, {7}, 16);
  CHECK(waste >= 0.11);
  CHECK(waste == doctest::Approx(4.0 / 36.0));
  // The figure stays pinned at the reservation while spares absorb faults.
  for (int f = 0; f <= 4; ++f) {
    std::vector<int> faults;
    for (int g = 0; g < f; ++g) faults.push_back(g);
    CHECK(baseline_waste(spec, 36, faults, 16) == doctest::Approx(4.0 / 36.0));
  }
}

TEST_CASE("NVL fragmentation appears once faults exhaust the reserve") {
  auto spec = make_baseline("nvl36", 16);
  std::vector<int> five = {0, 1, 2, 3, 4};
  // capacity 31 -> one TP-16 group; 15 fragmented + 4 reserved.
  CHECK(baseline_waste(spec, 36, five, 16) == doctest::Approx(19.0 / 36.0));
}

TEST_CASE("TPU cubes are voided by any faulty node") {
  auto spec = make_baseline("tpu_cube", 32);
  // One faulty 4-GPU node wastes the rest of its 64-GPU cube.
  auto faults = node_faults_to_gpus({0}, 4);
  CHECK(baseline_waste(spec, 128, faults, 32) == doctest::Approx(60.0 / 128.0));
  CHECK(baseline_waste(spec, 128, {}, 32) == 0.0);
}

TEST_CASE("SiP rings lose all healthy GPUs in a broken ring") {
  auto spec = make_baseline("sip_ring", 32);
  // One faulty GPU per ring, every ring broken.
  std::vector<int> faults;
  const int rings = 4;
  for (int ring = 0; ring < rings; ++ring) faults.push_back(ring * 32);
  double waste = baseline_waste(spec, rings * 32, faults, 32);
  CHECK(waste == doctest::Approx(31.0 / 32.0));
}

TEST_CASE("sip_ring requires hbd_size == tp_size") {
  BaselineSpec spec{BaselineKind::kSipRing, 16, 0.0};
  CHECK_THROWS_AS(baseline_waste(spec, 64, {}, 32), ConfigError);
}

TEST_CASE("baseline waste stays in [0,1] and big switch is the floor") {
  std::mt19937_64 rng(13);
  const int cluster = 2880;
  std::vector<BaselineSpec> others = {
      make_baseline("nvl36", 32), make_baseline("nvl72", 32),
      make_baseline("nvl576", 32), make_baseline("tpu_cube", 32),
      make_baseline("sip_ring", 32)};
  auto big = make_baseline("big_switch", 32);
  for (int iter = 0; iter < 25; ++iter) {
    std::vector<int> node_faults;
    for (int v = 0; v < cluster / 4; ++v)
      if (rng() % 25 == 0) node_faults.push_back(v);
    auto faults = node_faults_to_gpus(node_faults, 4);
    double floor_waste = baseline_waste(big, cluster, faults, 32);
    for (const auto& spec : others) {
      double w = baseline_waste(spec, cluster, faults, 32);
      CHECK(w >= 0.0);
      CHECK(w <= 1.0);
      CHECK(floor_waste <= w + 1e-12);
    }
  }
}

TEST_CASE("baselines reject unknown kinds and ragged clusters") {
  CHECK_THROWS_AS(make_baseline("mesh", 32), ConfigError);
  auto spec = make_baseline("nvl72", 32);
  CHECK_THROWS_AS(baseline_waste(spec, 100, {}, 32), ConfigError);
}

TEST_CASE("baseline max job scale") {
  auto spec = make_baseline("nvl72", 32);
  CHECK(baseline_max_job_scale(spec, 144, {}, 32) == 128);  // 2x64 per unit
  auto big = make_baseline("big_switch", 32);
  CHECK(baseline_max_job_scale(big, 144, {0}, 32) == 128);
}
