// SPDX-License-Identifier: Apache-2.0

#include "infhbd/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "infhbd/error.hpp"

namespace infhbd {

BaselineSpec make_baseline(const std::string& name, int tp_size) {
  BaselineSpec spec;
  if (name == "big_switch") {
    spec.kind = BaselineKind::kBigSwitch;
  } else if (name == "nvl36") {
    spec = {BaselineKind::kNvl, 36, 1.0 / 9.0};
  } else if (name == "nvl72") {
    spec = {BaselineKind::kNvl, 72, 1.0 / 9.0};
  } else if (name == "nvl576") {
    spec = {BaselineKind::kNvl, 576, 0.0};
  } else if (name == "tpu_cube") {
    spec = {BaselineKind::kTpuCube, 64, 0.0};
  } else if (name == "sip_ring") {
    spec = {BaselineKind::kSipRing, tp_size, 0.0};
  } else {
    throw ConfigError("baseline: unknown architecture '" + name + "'");
  }
  return spec;
}

namespace {

std::vector<int> faults_per_unit(int cluster_gpus, int unit,
                                 const std::vector<int>& faulty_gpus) {
  std::vector<int> counts(cluster_gpus / unit, 0);
  for (int g : faulty_gpus) {
    if (g < 0 || g >= cluster_gpus)
      throw ConfigError("baseline: faulty GPU index out of range");
    ++counts[g / unit];
  }
  return counts;
}

struct UnitTally {
  long long wasted = 0;
  long long schedulable = 0;
};

UnitTally tally_units(const BaselineSpec& spec, int cluster_gpus,
                      const std::vector<int>& faulty_gpus, int tp_size) {
  const int unit = spec.hbd_size;
  if (unit < 1) throw ConfigError("baseline: hbd_size must be >= 1");
  if (cluster_gpus % unit != 0)
    throw ConfigError("baseline: cluster_gpus must divide into HBD units");
  auto faults = faults_per_unit(cluster_gpus, unit, faulty_gpus);

  UnitTally tally;
  for (int f : faults) {
    const int healthy = unit - f;
    long long wasted = 0, usable = 0;
    switch (spec.kind) {
      case BaselineKind::kNvl: {
        const int reserved =
            static_cast<int>(std::floor(unit * spec.reserved_fraction));
        const int capacity = std::min(unit - reserved, healthy);
        usable = capacity / tp_size * tp_size;
        wasted = std::min<long long>(healthy,
                                     reserved + (capacity - usable));
        break;
      }
      case BaselineKind::kTpuCube:
        if (f > 0) {
          wasted = healthy;
        } else {
          usable = unit / tp_size * tp_size;
          wasted = unit - usable;
        }
        break;
      case BaselineKind::kSipRing:
        if (f > 0) {
          wasted = healthy;
        } else {
          usable = unit;  // the ring is one TP group
        }
        break;
      case BaselineKind::kBigSwitch:
        break;  // handled at cluster granularity
    }
    tally.wasted += wasted;
    tally.schedulable += usable;
  }
  return tally;
}

}  // namespace

double baseline_waste(const BaselineSpec& spec, int cluster_gpus,
                      const std::vector<int>& faulty_gpus, int tp_size) {
  if (tp_size < 1) throw ConfigError("baseline: tp_size must be >= 1");
  if (cluster_gpus < 1) throw ConfigError("baseline: cluster_gpus must be >= 1");
  if (spec.kind == BaselineKind::kBigSwitch) {
    int healthy = cluster_gpus - static_cast<int>(faulty_gpus.size());
    return static_cast<double>(healthy % tp_size) / cluster_gpus;
  }
  if (spec.kind == BaselineKind::kSipRing && spec.hbd_size != tp_size)
    throw ConfigError("baseline: sip_ring hbd_size must equal tp_size");
  auto tally = tally_units(spec, cluster_gpus, faulty_gpus, tp_size);
  return static_cast<double>(tally.wasted) / cluster_gpus;
}

int baseline_max_job_scale(const BaselineSpec& spec, int cluster_gpus,
                           const std::vector<int>& faulty_gpus, int tp_size) {
  if (spec.kind == BaselineKind::kBigSwitch) {
    int healthy = cluster_gpus - static_cast<int>(faulty_gpus.size());
    return healthy / tp_size * tp_size;
  }
  auto tally = tally_units(spec, cluster_gpus, faulty_gpus, tp_size);
  return static_cast<int>(tally.schedulable);
}

}  // namespace infhbd
