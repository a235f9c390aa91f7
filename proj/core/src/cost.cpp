// SPDX-License-Identifier: Apache-2.0

#include "infhbd/cost.hpp"

#include <fstream>
#include <istream>
#include <map>

#include "infhbd/csv.hpp"
#include "infhbd/error.hpp"

namespace infhbd {

double total_interconnect_cost(const ArchitectureBOM& bom) {
  double sum = 0.0;
  for (const auto& c : bom.components) sum += c.quantity * c.unit_cost;
  return sum;
}

double total_interconnect_power(const ArchitectureBOM& bom) {
  double sum = 0.0;
  for (const auto& c : bom.components) sum += c.quantity * c.unit_power;
  return sum;
}

PerGpuFigures per_gpu_cost_power(const ArchitectureBOM& bom) {
  if (bom.gpu_count < 1)
    throw ConfigError("cost: gpu_count must be >= 1 for " + bom.architecture);
  PerGpuFigures out;
  out.cost = total_interconnect_cost(bom) / bom.gpu_count;
  out.watts = total_interconnect_power(bom) / bom.gpu_count;
  if (bom.per_gpu_bandwidth > 0.0) {
    out.cost_per_gbps = out.cost / bom.per_gpu_bandwidth;
    out.watts_per_gbps = out.watts / bom.per_gpu_bandwidth;
  }
  return out;
}

double aggregate_cost(double gpu_unit_cost, long long wasted_gpus,
                      long long faulty_gpus, double interconnect_cost) {
  return gpu_unit_cost * static_cast<double>(wasted_gpus + faulty_gpus) +
         interconnect_cost;
}

std::vector<ArchitectureBOM> load_boms(std::istream& components,
                                       std::istream& architectures) {
  auto arch_table = csv::read(architectures);
  if (arch_table.schema_name != "architectures")
    throw ParseError("bom: expected 'architectures' schema");
  std::map<std::string, ArchitectureBOM> by_name;
  std::vector<std::string> order;
  for (const auto& row : arch_table.rows) {
    ArchitectureBOM bom;
    bom.architecture = row[0];
    bom.gpu_count = std::stoi(row[1]);
    bom.per_gpu_bandwidth = std::stod(row[2]);
    order.push_back(bom.architecture);
    by_name[bom.architecture] = std::move(bom);
  }

  auto comp_table = csv::read(components);
  if (comp_table.schema_name != "components")
    throw ParseError("bom: expected 'components' schema");
  for (const auto& row : comp_table.rows) {
    auto it = by_name.find(row[0]);
    if (it == by_name.end())
      throw ParseError("bom: component row for unknown architecture '" +
                       row[0] + "'");
    ComponentEntry entry;
    entry.name = row[1];
    entry.quantity = std::stod(row[2]);
    entry.unit_cost = std::stod(row[3]);
    entry.unit_bandwidth = std::stod(row[4]);
    entry.unit_power = std::stod(row[5]);
    it->second.components.push_back(std::move(entry));
  }

  std::vector<ArchitectureBOM> out;
  out.reserve(order.size());
  for (const auto& name : order) out.push_back(std::move(by_name[name]));
  return out;
}

std::vector<ArchitectureBOM> load_bom_files(const std::string& components_path,
                                            const std::string& arch_path) {
  std::ifstream comp(components_path);
  if (!comp) throw ParseError("bom: cannot open " + components_path);
  std::ifstream arch(arch_path);
  if (!arch) throw ParseError("bom: cannot open " + arch_path);
  return load_boms(comp, arch);
}

const ArchitectureBOM& find_bom(const std::vector<ArchitectureBOM>& boms,
                                const std::string& architecture) {
  for (const auto& bom : boms)
    if (bom.architecture == architecture) return bom;
  throw ConfigError("bom: no architecture named '" + architecture + "'");
}

}  // namespace infhbd
