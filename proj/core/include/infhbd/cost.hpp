// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace infhbd {

struct ComponentEntry {
  std::string name;
  double quantity = 0.0;
  double unit_cost = 0.0;       // USD
  double unit_bandwidth = 0.0;  // GBps
  double unit_power = 0.0;      // Watts
};

struct ArchitectureBOM {
  std::string architecture;
  int gpu_count = 0;
  double per_gpu_bandwidth = 0.0;  // GBps
  std::vector<ComponentEntry> components;
};

struct PerGpuFigures {
  double cost = 0.0;            // USD per GPU
  double watts = 0.0;           // W per GPU
  double cost_per_gbps = 0.0;   // USD per GPU per GBps
  double watts_per_gbps = 0.0;  // W per GPU per GBps
};

PerGpuFigures per_gpu_cost_power(const ArchitectureBOM& bom);

double total_interconnect_cost(const ArchitectureBOM& bom);
double total_interconnect_power(const ArchitectureBOM& bom);

// Cost_GPU * (wasted + faulty) + interconnect.
double aggregate_cost(double gpu_unit_cost, long long wasted_gpus,
                      long long faulty_gpus, double interconnect_cost);

// components: architecture,component,quantity,unit_cost_usd,
//             unit_bandwidth_gbps,unit_power_w
// architectures: architecture,gpu_count,per_gpu_bandwidth_gbps
std::vector<ArchitectureBOM> load_boms(std::istream& components,
                                       std::istream& architectures);
std::vector<ArchitectureBOM> load_bom_files(const std::string& components_path,
                                            const std::string& arch_path);

const ArchitectureBOM& find_bom(const std::vector<ArchitectureBOM>& boms,
                                const std::string& architecture);

}  // namespace infhbd
