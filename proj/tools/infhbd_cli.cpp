// SPDX-License-Identifier: Apache-2.0
//
// Scenario driver for the reconfigurable K-hop ring simulator: builds
// topologies, runs placements over fault traces, and emits CSV/JSON reports.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "infhbd/analysis.hpp"
#include "infhbd/baselines.hpp"
#include "infhbd/collectives.hpp"
#include "infhbd/cost.hpp"
#include "infhbd/csv.hpp"
#include "infhbd/error.hpp"
#include "infhbd/faults.hpp"
#include "infhbd/metrics.hpp"
#include "infhbd/orchestration.hpp"
#include "infhbd/parallel.hpp"
#include "infhbd/rng.hpp"
#include "infhbd/topology.hpp"

namespace {

using namespace infhbd;

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string format = "csv";
};

struct ClusterOptions {
  std::string config_path;
  ClusterConfig flags;
  bool ring = false;

  ClusterConfig resolve() const {
    if (!config_path.empty()) return load_cluster_config_file(config_path);
    ClusterConfig cfg = flags;
    cfg.ring_closed = ring;
    cfg.validate();
    return cfg;
  }
};

void add_cluster_options(CLI::App* cmd, ClusterOptions& opts) {
  cmd->add_option("--config", opts.config_path, "cluster config file");
  cmd->add_option("--nodes", opts.flags.nodes, "node count");
  cmd->add_option("--gpus-per-node", opts.flags.gpus_per_node, "GPUs per node");
  cmd->add_option("--k", opts.flags.k, "hop radius");
  cmd->add_option("--nodes-per-tor", opts.flags.nodes_per_tor, "nodes per ToR");
  cmd->add_option("--nodes-per-domain", opts.flags.nodes_per_domain,
                  "nodes per aggregation domain");
  cmd->add_flag("--ring", opts.ring, "close the line into a ring");
}

struct FaultOptions {
  std::string trace_path;
  double ratio = -1.0;
  bool exact_count = false;

  bool has_trace() const { return !trace_path.empty(); }
  void require_one() const {
    if (has_trace() == (ratio >= 0.0))
      throw ConfigError("exactly one fault source required: --trace or --fault-ratio");
  }
};

void add_fault_options(CLI::App* cmd, FaultOptions& opts) {
  cmd->add_option("--trace", opts.trace_path, "fault trace CSV");
  cmd->add_option("--fault-ratio", opts.ratio, "synthetic node fault ratio");
  cmd->add_flag("--exact-count", opts.exact_count,
                "draw exactly ratio*n faulty nodes");
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw ConfigError("cannot open output file " + path);
  return file;
}

std::vector<int> gpu_faults(const std::vector<int>& node_faults, int r) {
  std::vector<int> gpus;
  gpus.reserve(node_faults.size() * r);
  for (int v : node_faults)
    for (int g = 0; g < r; ++g) gpus.push_back(v * r + g);
  return gpus;
}

int run_topo(const ClusterOptions& cluster, bool alltoall, bool dump,
             const std::string& out_file) {
  auto cfg = cluster.resolve();
  auto topo = alltoall ? build_alltoall_topology(cfg) : build_khop_topology(cfg);
  if (dump) {
    std::ofstream file;
    topo.dump_edges(open_out(file, out_file));
    return 0;
  }
  int min_deg = topo.node_count(), max_deg = 0;
  for (int v = 0; v < topo.node_count(); ++v) {
    min_deg = std::min(min_deg, topo.degree(v));
    max_deg = std::max(max_deg, topo.degree(v));
  }
  std::cout << "nodes " << topo.node_count() << "\n"
            << "edges " << topo.edges().size() << "\n"
            << "degree " << min_deg << ".." << max_deg << "\n";
  return 0;
}

// Traces recorded on a larger cluster are folded onto this one (node i ->
// i mod n); the fold is reported so it shows up in run logs.
FaultTimeline load_trace_for_cluster(const std::string& path,
                                     const ClusterConfig& cfg) {
  auto timeline = load_trace_file(path);
  if (timeline.node_count() > cfg.nodes) {
    std::cerr << "note: trace covers " << timeline.node_count()
              << " nodes; folding onto " << cfg.nodes
              << " (node i -> i mod " << cfg.nodes << ")\n";
    timeline = remap_trace_modulo(timeline, cfg.nodes);
  }
  return timeline;
}

std::vector<int> snapshot_faults(const FaultOptions& faults,
                                 const ClusterConfig& cfg, std::uint64_t seed,
                                 std::int64_t at) {
  if (faults.has_trace())
    return load_trace_for_cluster(faults.trace_path, cfg).faulty_nodes_at(at);
  auto rng = make_rng(seed);
  return sample_fault_set(cfg.nodes, faults.ratio, rng, faults.exact_count);
}

int run_place(const GlobalOptions& global, const ClusterOptions& cluster,
              const FaultOptions& faults, const std::string& mode, int tp,
              int scale, std::int64_t at, const std::string& out_file) {
  auto cfg = cluster.resolve();
  faults.require_one();
  auto topo = build_khop_topology(cfg);
  auto faulty = snapshot_faults(faults, cfg, global.seed, at);

  JobSpec job;
  job.tp_size = tp;
  job.gpus_per_node = cfg.gpus_per_node;
  job.job_scale = scale;
  job.validate();

  std::optional<PlacementScheme> scheme;
  if (mode == "dcn-free") {
    scheme = orchestrate_dcn_free(topo, faulty, job.nodes_per_group());
  } else if (mode == "fat-tree") {
    scheme = orchestrate_fat_tree(topo, faulty, job);
  } else if (mode == "greedy") {
    scheme = orchestrate_greedy_baseline(topo, faulty, job, global.seed);
  } else {
    throw ConfigError("place: unknown mode '" + mode + "'");
  }
  if (!scheme) {
    std::cerr << "place: job scale " << scale
              << " unsatisfiable on this fault set\n";
    return 3;
  }
  std::ofstream file;
  open_out(file, out_file) << placement_to_json(*scheme) << "\n";
  return 0;
}

struct SimulateOptions {
  std::string mode = "dcn-free";
  std::string arch;  // empty: config file key, default "infhbd"
  int tp = 32;
  int scale = 0;
  int steps = 100;
  double synthetic_ps = -1.0;
  std::string trace_path;
  // Sweep axes (comma-separated lists); empty means "use the single value".
  std::string sweep_fault;
  std::string sweep_tp;
  std::string sweep_k;
  std::string sweep_scale_ratio;
  double gpu_cost = -1.0;
  double interconnect_per_gpu = -1.0;
};

struct TimelineResult {
  std::vector<MetricsReport> rows;
  std::int64_t fault_waiting = 0;
};

TimelineResult evaluate_timeline(const ClusterTopology& topo,
                                 const FaultTimeline& timeline,
                                 const JobSpec& job, const std::string& mode,
                                 const std::string& arch, std::uint64_t seed) {
  const ClusterConfig& cfg = topo.config();
  const bool baseline = arch != "infhbd";
  BaselineSpec baseline_spec;
  if (baseline) baseline_spec = make_baseline(arch, job.tp_size);

  TimelineResult result;
  auto fixed = timeline.with_fixed_repair_duration();
  sweep_intervals(timeline, [&](std::int64_t t0, std::int64_t t1,
                                const std::vector<int>& faulty) {
    (void)t1;
    MetricsReport row;
    row.timestamp = t0;
    row.faulty_gpus = static_cast<int>(faulty.size()) * cfg.gpus_per_node;
    if (baseline) {
      auto gpus = gpu_faults(faulty, cfg.gpus_per_node);
      double ratio =
          baseline_waste(baseline_spec, topo.total_gpus(), gpus, job.tp_size);
      row.waste_ratio = ratio;
      row.wasted_gpus = static_cast<int>(std::llround(ratio * topo.total_gpus()));
      row.max_job_scale = baseline_max_job_scale(baseline_spec,
                                                 topo.total_gpus(), gpus,
                                                 job.tp_size);
      row.cross_tor_fraction = 0.0;
    } else {
      std::optional<PlacementScheme> scheme;
      if (mode == "fat-tree") {
        scheme = orchestrate_fat_tree(topo, faulty, job);
      } else if (mode == "greedy") {
        scheme = orchestrate_greedy_baseline(topo, faulty, job,
                                             derive_seed(seed, t0));
      } else {
        scheme = orchestrate_dcn_free(topo, faulty, job.nodes_per_group());
      }
      if (scheme) {
        if (job.groups_needed() > 0 &&
            scheme->group_count() > job.groups_needed()) {
          scheme->groups.resize(job.groups_needed());
          scheme->rings.resize(job.groups_needed());
        }
        row.waste_ratio = waste_ratio(*scheme, topo, faulty);
        row.cross_tor_fraction = cross_tor_fraction(*scheme, topo, job);
      } else {
        // Unsatisfiable at this step: everything healthy sits idle.
        row.waste_ratio =
            static_cast<double>(topo.total_gpus() - row.faulty_gpus) /
            topo.total_gpus();
        row.cross_tor_fraction = 0.0;
      }
      row.wasted_gpus =
          static_cast<int>(std::llround(row.waste_ratio * topo.total_gpus()));
      row.max_job_scale = max_job_scale(topo, faulty, job);
    }
    result.rows.push_back(row);
  });

  if (job.job_scale > 0) {
    if (baseline) {
      // Same fixed-repair sweep as the reconfigurable path, with the
      // baseline's schedulable capacity deciding whether the job is blocked.
      sweep_intervals(fixed, [&](std::int64_t t0, std::int64_t t1,
                                 const std::vector<int>& faulty) {
        auto gpus = gpu_faults(faulty, cfg.gpus_per_node);
        if (baseline_max_job_scale(baseline_spec, topo.total_gpus(), gpus,
                                   job.tp_size) < job.job_scale)
          result.fault_waiting += t1 - t0;
      });
    } else {
      result.fault_waiting = fault_waiting_time(timeline, job, topo);
    }
  }
  return result;
}

std::vector<double> parse_list(const std::string& csv_list,
                               const std::string& flag) {
  std::vector<double> out;
  std::istringstream in(csv_list);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("simulate: bad value '" + item + "' in " + flag);
    }
  }
  if (out.empty()) throw ConfigError("simulate: empty list for " + flag);
  return out;
}

int run_sweep(const GlobalOptions& global, const ClusterConfig& base_cfg,
              const SimulateOptions& opts, const std::string& arch) {
  auto faults = opts.sweep_fault.empty()
                    ? std::vector<double>{std::max(0.0, opts.synthetic_ps)}
                    : parse_list(opts.sweep_fault, "--sweep-fault");
  auto tps = opts.sweep_tp.empty()
                 ? std::vector<double>{static_cast<double>(opts.tp)}
                 : parse_list(opts.sweep_tp, "--sweep-tp");
  auto ks = opts.sweep_k.empty()
                ? std::vector<double>{static_cast<double>(base_cfg.k)}
                : parse_list(opts.sweep_k, "--sweep-k");
  std::vector<double> ratios;
  if (!opts.sweep_scale_ratio.empty()) {
    ratios = parse_list(opts.sweep_scale_ratio, "--sweep-scale-ratio");
  } else if (opts.scale > 0) {
    ratios = {static_cast<double>(opts.scale) /
              (static_cast<double>(base_cfg.nodes) * base_cfg.gpus_per_node)};
  } else {
    ratios = {0.0};
  }

  struct Point {
    int k, tp;
    double fault_ratio, scale_ratio;
  };
  std::vector<Point> points;
  for (double k : ks)
    for (double tp : tps)
      for (double f : faults)
        for (double ratio : ratios)
          points.push_back({static_cast<int>(k), static_cast<int>(tp), f,
                            ratio});

  struct PointResult {
    double mean_waste = 0, p99_waste = 0, mean_cross = 0, mean_scale = 0;
    std::int64_t waiting = 0;
  };
  std::vector<PointResult> results(points.size());
  parallel_for(points.size(), [&](std::size_t idx) {
    const auto& pt = points[idx];
    ClusterConfig cfg = base_cfg;
    cfg.k = pt.k;
    cfg.validate();
    auto topo = build_khop_topology(cfg);
    auto timeline = synthesize_trace_node_prob(
        pt.fault_ratio, cfg.nodes, opts.steps, derive_seed(global.seed, idx));
    JobSpec job;
    job.tp_size = pt.tp;
    job.gpus_per_node = cfg.gpus_per_node;
    job.job_scale = static_cast<int>(pt.scale_ratio * topo.total_gpus()) /
                    pt.tp * pt.tp;
    auto outcome = evaluate_timeline(topo, timeline, job, opts.mode, arch,
                                     derive_seed(global.seed, idx));
    PointResult agg;
    std::vector<double> wastes;
    for (const auto& row : outcome.rows) {
      agg.mean_waste += row.waste_ratio;
      agg.mean_cross += row.cross_tor_fraction;
      agg.mean_scale += row.max_job_scale;
      wastes.push_back(row.waste_ratio);
    }
    if (!outcome.rows.empty()) {
      double count = static_cast<double>(outcome.rows.size());
      agg.mean_waste /= count;
      agg.mean_cross /= count;
      agg.mean_scale /= count;
      std::sort(wastes.begin(), wastes.end());
      agg.p99_waste = wastes[static_cast<std::size_t>(0.99 * (wastes.size() - 1))];
    }
    agg.waiting = outcome.fault_waiting;
    results[idx] = agg;
  });

  csv::Table table;
  table.schema_name = "sweep";
  table.columns = {"k",          "tp",           "fault_ratio",
                   "scale_ratio", "mean_waste",   "p99_waste",
                   "mean_cross_tor", "mean_max_job_scale",
                   "fault_waiting_seconds"};
  const bool with_cost = opts.gpu_cost >= 0.0 && opts.interconnect_per_gpu >= 0.0;
  if (with_cost) table.columns.push_back("aggregate_cost");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    const auto& res = results[i];
    std::vector<std::string> row = {
        std::to_string(pt.k),
        std::to_string(pt.tp),
        csv::format_double(pt.fault_ratio),
        csv::format_double(pt.scale_ratio),
        csv::format_double(res.mean_waste),
        csv::format_double(res.p99_waste),
        csv::format_double(res.mean_cross),
        csv::format_double(res.mean_scale),
        std::to_string(res.waiting)};
    if (with_cost) {
      double total = base_cfg.nodes * base_cfg.gpus_per_node;
      double unavailable = (res.mean_waste + pt.fault_ratio) * total;
      row.push_back(csv::format_double(
          aggregate_cost(opts.gpu_cost, static_cast<long long>(unavailable), 0,
                         opts.interconnect_per_gpu * total)));
    }
    table.rows.push_back(std::move(row));
  }

  namespace fs = std::filesystem;
  fs::create_directories(global.out_dir);
  std::ofstream out(fs::path(global.out_dir) / "sweep.csv");
  csv::write(out, table);
  std::cout << points.size() << " sweep points, outputs in " << global.out_dir
            << "\n";
  return 0;
}

int run_simulate(const GlobalOptions& global, const ClusterOptions& cluster,
                 const SimulateOptions& opts) {
  auto cfg = cluster.resolve();
  const std::string arch = opts.arch.empty() ? cfg.architecture : opts.arch;

  const bool sweeping = !opts.sweep_fault.empty() || !opts.sweep_tp.empty() ||
                        !opts.sweep_k.empty() ||
                        !opts.sweep_scale_ratio.empty();
  if (sweeping) {
    if (!opts.trace_path.empty())
      throw ConfigError("simulate: sweeps use synthetic faults, not --trace");
    return run_sweep(global, cfg, opts, arch);
  }

  auto topo = build_khop_topology(cfg);
  FaultTimeline timeline;
  if (!opts.trace_path.empty()) {
    timeline = load_trace_for_cluster(opts.trace_path, cfg);
  } else if (opts.synthetic_ps >= 0.0) {
    timeline = synthesize_trace_node_prob(opts.synthetic_ps, cfg.nodes,
                                          opts.steps, global.seed);
  } else {
    throw ConfigError("simulate: need --trace or --synthetic-ps");
  }

  JobSpec job;
  job.tp_size = opts.tp;
  job.gpus_per_node = cfg.gpus_per_node;
  job.job_scale = opts.scale;
  job.validate();

  auto outcome = evaluate_timeline(topo, timeline, job, opts.mode, arch,
                                   global.seed);

  namespace fs = std::filesystem;
  fs::create_directories(global.out_dir);
  {
    std::ofstream csv_out(fs::path(global.out_dir) / "metrics.csv");
    write_metrics_csv(csv_out, outcome.rows);
  }
  auto summary = summarize_metrics(outcome.rows, outcome.fault_waiting);
  {
    std::ofstream json_out(fs::path(global.out_dir) / "summary.json");
    json_out << summary << "\n";
  }
  if (global.format == "json")
    std::cout << summary << "\n";
  else
    std::cout << "rows " << outcome.rows.size() << ", outputs in "
              << global.out_dir << "\n";
  return 0;
}

int run_bound(bool sweep, double ps, int k, int r, int nt, int mc_trials,
              std::uint64_t seed, const std::string& out_file) {
  std::ofstream file;
  auto& out = open_out(file, out_file);
  if (sweep) {
    csv::Table table;
    table.schema_name = "bound-sweep";
    table.columns = {"r", "k", "p_s", "bound"};
    for (int rr : {4, 8}) {
      double prob = rr == 4 ? 0.0368 : 0.0722;
      for (int kk : {2, 3, 4}) {
        BoundParams params;
        params.p_s = prob;
        params.k = kk;
        params.r = rr;
        params.tp_size = 32;
        table.rows.push_back({std::to_string(rr), std::to_string(kk),
                              csv::format_double(prob),
                              csv::format_double(waste_ratio_bound(params))});
      }
    }
    csv::write(out, table);
    return 0;
  }
  BoundParams params;
  params.p_s = ps;
  params.k = k;
  params.r = r;
  params.tp_size = nt;
  out << "bound " << csv::format_double(waste_ratio_bound(params)) << "\n";
  auto eb = breakpoint_expectation(params);
  out << "breakpoints_per_middle_node "
      << csv::format_double(eb.per_middle_node) << "\n";
  if (mc_trials > 0) {
    auto mc = monte_carlo_waste(params, mc_trials, seed);
    out << "mc_mean " << csv::format_double(mc.mean) << "\n"
        << "mc_ci_half_width " << csv::format_double(mc.ci_half_width) << "\n"
        << "mc_absolute_mean " << csv::format_double(mc.absolute_mean) << "\n";
  }
  return 0;
}

int run_cost(const std::string& arch, const std::string& bom_path,
             const std::string& arch_path, const std::string& out_file) {
  auto boms = load_bom_files(bom_path, arch_path);
  csv::Table table;
  table.schema_name = "cost";
  table.columns = {"architecture", "cost_per_gpu", "watts_per_gpu",
                   "cost_per_gpu_gbps", "watts_per_gpu_gbps"};
  for (const auto& bom : boms) {
    if (!arch.empty() && bom.architecture != arch) continue;
    auto fig = per_gpu_cost_power(bom);
    table.rows.push_back({bom.architecture, csv::format_double(fig.cost),
                          csv::format_double(fig.watts),
                          csv::format_double(fig.cost_per_gbps),
                          csv::format_double(fig.watts_per_gbps)});
  }
  if (!arch.empty() && table.rows.empty())
    throw ConfigError("cost: no architecture named '" + arch + "'");
  std::ofstream file;
  csv::write(open_out(file, out_file), table);
  return 0;
}

int run_alltoall(int p, int m, bool verify, double ts, double tw,
                 bool with_reconfig, const std::string& out_file) {
  auto schedule = binary_exchange_schedule(p, m);
  std::ofstream file;
  auto& out = open_out(file, out_file);
  csv::Table table;
  table.schema_name = "alltoall-schedule";
  table.columns = {"round", "sender", "receiver", "block_lo", "block_hi",
                   "units"};
  for (std::size_t round = 0; round < schedule.rounds.size(); ++round)
    for (const auto& t : schedule.rounds[round].transfers)
      table.rows.push_back({std::to_string(round), std::to_string(t.sender),
                            std::to_string(t.receiver),
                            std::to_string(t.block_lo),
                            std::to_string(t.block_hi),
                            std::to_string(t.units)});
  csv::write(out, table);

  double setup = ts + (with_reconfig ? kFastSwitchLatencySeconds : 0.0);
  out << "# exchange_cost " << csv::format_double(exchange_cost(p, m, setup, tw))
      << "\n";
  out << "# ring_cost " << csv::format_double(ring_alltoall_cost(p, m, setup, tw))
      << "\n";

  if (!verify) return 0;
  auto states = simulate_exchange(schedule);
  bool ok = true;
  auto blocks = delivered_blocks(states);
  for (int i = 0; i < p && ok; ++i)
    for (int origin = 0; origin < p && ok; ++origin)
      if (!blocks[i][origin]) ok = false;
  for (const auto& s : states)
    for (auto sent : s.sent_per_round)
      if (sent != static_cast<std::int64_t>(p) * m / 2) ok = false;
  out << "# verify " << (ok ? "PASS" : "FAIL")
      << " (direct alltoall oracle + per-round volume)\n";
  return ok ? 0 : 1;
}

int run_trace_stats(const std::string& trace_path) {
  auto timeline = load_trace_file(trace_path);
  std::cout << "nodes " << timeline.node_count() << "\n"
            << "events " << timeline.events().size() << "\n"
            << "mean_faulty_ratio "
            << csv::format_double(timeline.mean_faulty_ratio()) << "\n"
            << "p99_faulty_ratio "
            << csv::format_double(timeline.p99_faulty_ratio()) << "\n"
            << "mean_event_duration "
            << csv::format_double(timeline.mean_event_duration()) << "\n";
  return 0;
}

int run_trace_convert(const std::string& trace_path,
                      const std::string& out_file, std::uint64_t seed) {
  auto timeline = load_trace_file(trace_path);
  double p8 = timeline.mean_faulty_ratio();
  double inherit = split_inheritance_prob(p8);
  auto converted = normalize_trace_8to4(timeline, seed, inherit);
  if (!out_file.empty()) {
    std::ofstream out(out_file);
    if (!out) throw ConfigError("cannot open output file " + out_file);
    save_trace(out, converted);
  } else {
    save_trace(std::cout, converted);
  }
  std::cerr << "input_mean_ratio " << csv::format_double(p8) << "\n"
            << "inheritance_prob " << csv::format_double(inherit) << "\n"
            << "converted_mean_ratio "
            << csv::format_double(converted.mean_faulty_ratio()) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reconfigurable K-hop ring HBD simulator"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "base RNG seed");
  app.add_option("--out", global.out_dir, "output directory");
  app.add_option("--format", global.format, "stdout format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // topo
  ClusterOptions topo_cluster;
  bool topo_alltoall = false, topo_dump = false;
  std::string topo_out;
  auto* topo_cmd = app.add_subcommand("topo", "build and inspect a topology");
  add_cluster_options(topo_cmd, topo_cluster);
  topo_cmd->add_flag("--alltoall", topo_alltoall,
                     "power-of-two hop distances for binary exchange");
  topo_cmd->add_flag("--dump", topo_dump, "print the edge list");
  topo_cmd->add_option("--out-file", topo_out, "edge list destination");

  // place
  ClusterOptions place_cluster;
  FaultOptions place_faults;
  std::string place_mode = "dcn-free", place_out;
  int place_tp = 32, place_scale = 0;
  std::int64_t place_at = 0;
  auto* place_cmd = app.add_subcommand("place", "compute a TP placement");
  add_cluster_options(place_cmd, place_cluster);
  add_fault_options(place_cmd, place_faults);
  place_cmd->add_option("--mode", place_mode, "dcn-free | fat-tree | greedy")
      ->check(CLI::IsMember({"dcn-free", "fat-tree", "greedy"}));
  place_cmd->add_option("--tp", place_tp, "TP size in GPUs");
  place_cmd->add_option("--scale", place_scale, "job scale in GPUs");
  place_cmd->add_option("--at", place_at, "trace timestamp for the snapshot");
  place_cmd->add_option("--out-file", place_out, "placement JSON destination");

  // simulate
  ClusterOptions sim_cluster;
  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "sweep a fault timeline");
  add_cluster_options(sim_cmd, sim_cluster);
  sim_cmd->add_option("--mode", sim.mode, "dcn-free | fat-tree | greedy")
      ->check(CLI::IsMember({"dcn-free", "fat-tree", "greedy"}));
  sim_cmd->add_option("--arch", sim.arch,
                      "infhbd | big_switch | nvl36 | nvl72 | nvl576 | "
                      "tpu_cube | sip_ring");
  sim_cmd->add_option("--tp", sim.tp, "TP size in GPUs");
  sim_cmd->add_option("--scale", sim.scale, "job scale in GPUs");
  sim_cmd->add_option("--steps", sim.steps, "synthetic timeline steps");
  sim_cmd->add_option("--synthetic-ps", sim.synthetic_ps,
                      "synthetic per-step node fault probability");
  sim_cmd->add_option("--trace", sim.trace_path, "fault trace CSV");
  sim_cmd->add_option("--sweep-fault", sim.sweep_fault,
                      "comma-separated node fault ratios");
  sim_cmd->add_option("--sweep-tp", sim.sweep_tp, "comma-separated TP sizes");
  sim_cmd->add_option("--sweep-k", sim.sweep_k, "comma-separated hop radii");
  sim_cmd->add_option("--sweep-scale-ratio", sim.sweep_scale_ratio,
                      "comma-separated job-scale ratios");
  sim_cmd->add_option("--gpu-cost", sim.gpu_cost,
                      "GPU unit cost for the aggregate-cost column");
  sim_cmd->add_option("--interconnect-per-gpu", sim.interconnect_per_gpu,
                      "interconnect cost per GPU for the aggregate-cost column");

  // bound
  bool bound_sweep = false;
  double bound_ps = 0.0368;
  int bound_k = 3, bound_r = 4, bound_nt = 32, bound_mc = 0;
  std::string bound_out;
  auto* bound_cmd =
      app.add_subcommand("bound", "fault-tolerance waste bound");
  bound_cmd->add_flag("--sweep", bound_sweep, "emit the R x K grid");
  bound_cmd->add_option("--ps", bound_ps, "node fault probability");
  bound_cmd->add_option("--k", bound_k, "hop radius");
  bound_cmd->add_option("--r", bound_r, "GPUs per node");
  bound_cmd->add_option("--nt", bound_nt, "TP size in GPUs");
  bound_cmd->add_option("--mc", bound_mc, "Monte Carlo trials");
  bound_cmd->add_option("--out-file", bound_out, "destination");

  // cost
  std::string cost_arch, cost_out;
  std::string cost_bom = "data/component_costs.csv";
  std::string cost_archfile = "data/architectures.csv";
  auto* cost_cmd = app.add_subcommand("cost", "per-GPU interconnect figures");
  cost_cmd->add_option("--arch", cost_arch, "architecture name");
  cost_cmd->add_option("--bom", cost_bom, "component table CSV");
  cost_cmd->add_option("--arch-file", cost_archfile, "architecture table CSV");
  cost_cmd->add_option("--out-file", cost_out, "destination");

  // alltoall
  int a2a_p = 8, a2a_m = 1;
  bool a2a_verify = false, a2a_reconfig = false;
  double a2a_ts = 0.0, a2a_tw = 1.0;
  std::string a2a_out;
  auto* a2a_cmd =
      app.add_subcommand("alltoall", "binary exchange schedule and checks");
  a2a_cmd->add_option("--p", a2a_p, "group size (power of two)");
  a2a_cmd->add_option("--m", a2a_m, "units per block");
  a2a_cmd->add_flag("--verify", a2a_verify, "run the oracle comparison");
  a2a_cmd->add_option("--ts", a2a_ts, "setup time per round");
  a2a_cmd->add_option("--tw", a2a_tw, "time per data unit");
  a2a_cmd->add_flag("--with-reconfig", a2a_reconfig,
                    "add the fast-switch latency to each round");
  a2a_cmd->add_option("--out-file", a2a_out, "destination");

  // trace-stats
  std::string stats_trace;
  auto* stats_cmd = app.add_subcommand("trace-stats", "trace summary");
  stats_cmd->add_option("--trace", stats_trace, "fault trace CSV")->required();

  // trace-convert
  std::string conv_trace, conv_out;
  auto* conv_cmd =
      app.add_subcommand("trace-convert", "split 8-GPU nodes into 4-GPU pairs");
  conv_cmd->add_option("--trace", conv_trace, "fault trace CSV")->required();
  conv_cmd->add_option("--out-file", conv_out, "converted trace destination");

  // Let the global flags (--seed, --out, --format) appear after the verb.
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (topo_cmd->parsed())
      return run_topo(topo_cluster, topo_alltoall, topo_dump, topo_out);
    if (place_cmd->parsed())
      return run_place(global, place_cluster, place_faults, place_mode,
                       place_tp, place_scale, place_at, place_out);
    if (sim_cmd->parsed()) return run_simulate(global, sim_cluster, sim);
    if (bound_cmd->parsed())
      return run_bound(bound_sweep, bound_ps, bound_k, bound_r, bound_nt,
                       bound_mc, global.seed, bound_out);
    if (cost_cmd->parsed())
      return run_cost(cost_arch, cost_bom, cost_archfile, cost_out);
    if (a2a_cmd->parsed())
      return run_alltoall(a2a_p, a2a_m, a2a_verify, a2a_ts, a2a_tw,
                          a2a_reconfig, a2a_out);
    if (stats_cmd->parsed()) return run_trace_stats(stats_trace);
    if (conv_cmd->parsed())
      return run_trace_convert(conv_trace, conv_out, global.seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
