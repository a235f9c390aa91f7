// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace infhbd {

enum class BaselineKind { kBigSwitch, kNvl, kTpuCube, kSipRing };

struct BaselineSpec {
  BaselineKind kind = BaselineKind::kBigSwitch;
  int hbd_size = 0;                // GPUs per HBD unit; tp_size for SiP-Ring
  double reserved_fraction = 0.0;  // backup reservation (1/9 for NVL-36/72)
};

BaselineSpec make_baseline(const std::string& name, int tp_size);

// Waste fraction over cluster_gpus for the given faulty GPU set.
//  big_switch: fragmentation of the whole cluster.
//  nvl:        per HBD, the backup reservation is standing overhead (spares
//              substitute faults without adding capacity); faults beyond the
//              reservation shrink the schedulable partition and fragment it.
//  tpu_cube:   TP groups tile whole cubes; any faulty node voids its cube.
//  sip_ring:   a fixed ring equals one TP group; any fault voids the ring.
double baseline_waste(const BaselineSpec& spec, int cluster_gpus,
                      const std::vector<int>& faulty_gpus, int tp_size);

// GPUs actually schedulable into TP groups, for job-scale reporting.
int baseline_max_job_scale(const BaselineSpec& spec, int cluster_gpus,
                           const std::vector<int>& faulty_gpus, int tp_size);

}  // namespace infhbd
