// SPDX-License-Identifier: Apache-2.0

#include "infhbd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "json.hpp"

#include "infhbd/csv.hpp"
#include "infhbd/error.hpp"

namespace infhbd {

double waste_ratio(const PlacementScheme& placement,
                   const ClusterTopology& topology,
                   const std::vector<int>& faulty) {
  const int r = topology.gpus_per_node();
  const int total = topology.total_gpus();
  if (total == 0) return 0.0;
  std::set<int> faulty_set(faulty.begin(), faulty.end());
  int healthy_nodes = topology.node_count() - static_cast<int>(faulty_set.size());
  int wasted_gpus = (healthy_nodes - placement.placed_nodes()) * r;
  return static_cast<double>(wasted_gpus) / total;
}

double fragmentation_waste(int hbd_size, int n_fault, int tp_size) {
  if (tp_size < 1) throw ConfigError("fragmentation_waste: tp_size must be >= 1");
  if (n_fault < 0 || n_fault > hbd_size)
    throw ConfigError("fragmentation_waste: n_fault out of range");
  return static_cast<double>((hbd_size - n_fault) % tp_size) / hbd_size;
}

int max_job_scale(const ClusterTopology& topology,
                  const std::vector<int>& faulty, const JobSpec& job) {
  auto scheme = orchestrate_dcn_free(topology, faulty, job.nodes_per_group());
  return scheme.group_count() * job.tp_size;
}

void sweep_intervals(
    const FaultTimeline& timeline,
    const std::function<void(std::int64_t, std::int64_t,
                             const std::vector<int>&)>& fn) {
  // Endpoint walk: +1 at start, -1 at end, faulty set maintained in between.
  std::vector<std::pair<std::int64_t, int>> deltas;  // (time, +node / ~node)
  for (const auto& e : timeline.events()) {
    deltas.emplace_back(e.start, e.node_id + 1);
    deltas.emplace_back(e.end, -(e.node_id + 1));
  }
  std::sort(deltas.begin(), deltas.end());

  std::map<int, int> active;
  std::vector<int> faulty;
  std::int64_t prev = 0;
  std::size_t i = 0;
  auto emit = [&](std::int64_t upto) {
    if (upto > prev) {
      faulty.clear();
      for (const auto& [node, cnt] : active) faulty.push_back(node);
      fn(prev, upto, faulty);
      prev = upto;
    }
  };
  while (i < deltas.size()) {
    std::int64_t t = deltas[i].first;
    emit(t);
    while (i < deltas.size() && deltas[i].first == t) {
      int code = deltas[i].second;
      int node = std::abs(code) - 1;
      if (code > 0) {
        active[node]++;
      } else if (--active[node] == 0) {
        active.erase(node);
      }
      ++i;
    }
  }
  emit(timeline.horizon());
}

std::int64_t fault_waiting_time(const FaultTimeline& timeline,
                                const JobSpec& job,
                                const ClusterTopology& topology) {
  auto fixed = timeline.with_fixed_repair_duration();
  std::int64_t blocked = 0;
  sweep_intervals(fixed, [&](std::int64_t t0, std::int64_t t1,
                             const std::vector<int>& faulty) {
    if (max_job_scale(topology, faulty, job) < job.job_scale)
      blocked += t1 - t0;
  });
  return blocked;
}

double cross_tor_fraction(const PlacementScheme& placement,
                          const ClusterTopology& topology, const JobSpec& job) {
  const int p = topology.config().nodes_per_tor;
  const int r = job.gpus_per_node;
  const int t = job.tp_size;
  const int total_groups = placement.group_count();
  long long flows = 0, crossing = 0;

  auto count_pair = [&](int ga, int gb) {
    const auto& a = placement.groups[ga];
    const auto& b = placement.groups[gb];
    for (int rank = 0; rank < t; ++rank) {
      int na = a[rank / r];
      int nb = b[rank / r];
      ++flows;
      if (topology.tor_of(na) != topology.tor_of(nb)) ++crossing;
    }
  };

  for (int start = 0; start < total_groups; start += p) {
    int end = std::min(total_groups, start + p);
    int size = end - start;
    for (int g = start; g + 1 < end; ++g) count_pair(g, g + 1);
    if (size >= 3) count_pair(end - 1, start);  // close the ring
  }
  return flows ? static_cast<double>(crossing) / static_cast<double>(flows)
               : 0.0;
}

void write_metrics_csv(std::ostream& out,
                       const std::vector<MetricsReport>& rows) {
  csv::Table table;
  table.schema_name = "metrics";
  table.columns = {"t",          "faulty",        "wasted",
                   "waste_ratio", "max_job_scale", "cross_tor_fraction"};
  for (const auto& row : rows) {
    table.rows.push_back({std::to_string(row.timestamp),
                          std::to_string(row.faulty_gpus),
                          std::to_string(row.wasted_gpus),
                          csv::format_double(row.waste_ratio),
                          std::to_string(row.max_job_scale),
                          csv::format_double(row.cross_tor_fraction)});
  }
  csv::write(out, table);
}

std::vector<MetricsReport> read_metrics_csv(std::istream& in) {
  auto table = csv::read(in);
  if (table.schema_name != "metrics")
    throw ParseError("metrics csv: unexpected schema '" + table.schema_name + "'");
  std::vector<MetricsReport> rows;
  for (const auto& fields : table.rows) {
    MetricsReport row;
    row.timestamp = std::stoll(fields[0]);
    row.faulty_gpus = std::stoi(fields[1]);
    row.wasted_gpus = std::stoi(fields[2]);
    row.waste_ratio = std::stod(fields[3]);
    row.max_job_scale = std::stoi(fields[4]);
    row.cross_tor_fraction = std::stod(fields[5]);
    rows.push_back(row);
  }
  return rows;
}

namespace {

nlohmann::json percentiles(std::vector<double> values) {
  nlohmann::json j;
  if (values.empty()) {
    j["mean"] = 0.0;
    j["p50"] = 0.0;
    j["p99"] = 0.0;
    return j;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    std::size_t idx = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(values.size()))) ;
    if (idx > 0) --idx;
    return values[std::min(idx, values.size() - 1)];
  };
  j["mean"] = sum / static_cast<double>(values.size());
  j["p50"] = at(0.50);
  j["p99"] = at(0.99);
  return j;
}

}  // namespace

std::string summarize_metrics(const std::vector<MetricsReport>& rows,
                              std::int64_t fault_waiting_seconds) {
  std::vector<double> waste, cross, scale;
  for (const auto& row : rows) {
    waste.push_back(row.waste_ratio);
    cross.push_back(row.cross_tor_fraction);
    scale.push_back(static_cast<double>(row.max_job_scale));
  }
  nlohmann::json j;
  j["schema"] = "infhbd-summary-v1";
  j["rows"] = rows.size();
  j["waste_ratio"] = percentiles(std::move(waste));
  j["cross_tor_fraction"] = percentiles(std::move(cross));
  j["max_job_scale"] = percentiles(std::move(scale));
  j["fault_waiting_seconds"] = fault_waiting_seconds;
  return j.dump(2);
}

}  // namespace infhbd
