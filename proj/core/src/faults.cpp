// SPDX-License-Identifier: Apache-2.0

#include "infhbd/faults.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "infhbd/error.hpp"
#include "infhbd/rng.hpp"

namespace infhbd {

namespace {

std::vector<FaultEvent> merge_events(std::vector<FaultEvent> events) {
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    if (a.node_id != b.node_id) return a.node_id < b.node_id;
    return a.start < b.start;
  });
  std::vector<FaultEvent> merged;
  for (const auto& e : events) {
    if (!merged.empty() && merged.back().node_id == e.node_id &&
        e.start <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, e.end);
    } else {
      merged.push_back(e);
    }
  }
  return merged;
}

}  // namespace

FaultTimeline::FaultTimeline(std::vector<FaultEvent> events, int node_count,
                             std::int64_t horizon)
    : events_(merge_events(std::move(events))),
      node_count_(node_count),
      horizon_(horizon) {
  for (const auto& e : events_) horizon_ = std::max(horizon_, e.end);
}

std::vector<int> FaultTimeline::faulty_nodes_at(std::int64_t t) const {
  std::vector<int> out;
  for (const auto& e : events_)
    if (e.start <= t && t < e.end) out.push_back(e.node_id);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int FaultTimeline::faulty_count_at(std::int64_t t) const {
  return static_cast<int>(faulty_nodes_at(t).size());
}

std::vector<std::int64_t> FaultTimeline::boundaries() const {
  std::vector<std::int64_t> ts;
  ts.reserve(events_.size() * 2 + 2);
  ts.push_back(0);
  for (const auto& e : events_) {
    ts.push_back(e.start);
    ts.push_back(e.end);
  }
  ts.push_back(horizon_);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

double FaultTimeline::mean_faulty_ratio() const {
  if (node_count_ <= 0 || horizon_ <= 0) return 0.0;
  double faulty_node_seconds = 0.0;
  for (const auto& e : events_) {
    auto len = std::min(e.end, horizon_) - std::max<std::int64_t>(e.start, 0);
    if (len > 0) faulty_node_seconds += static_cast<double>(len);
  }
  return faulty_node_seconds /
         (static_cast<double>(horizon_) * static_cast<double>(node_count_));
}

double FaultTimeline::p99_faulty_ratio() const {
  if (node_count_ <= 0 || horizon_ <= 0) return 0.0;
  auto ts = boundaries();
  std::vector<std::pair<double, double>> weighted;  // (ratio, duration)
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    double dur = static_cast<double>(ts[i + 1] - ts[i]);
    if (dur <= 0) continue;
    double ratio =
        static_cast<double>(faulty_count_at(ts[i])) / node_count_;
    weighted.emplace_back(ratio, dur);
  }
  if (weighted.empty()) return 0.0;
  std::sort(weighted.begin(), weighted.end());
  double total = 0.0;
  for (const auto& [r, w] : weighted) total += w;
  double cum = 0.0;
  for (const auto& [r, w] : weighted) {
    cum += w;
    if (cum >= 0.99 * total) return r;
  }
  return weighted.back().first;
}

double FaultTimeline::mean_event_duration() const {
  if (events_.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& e : events_) sum += static_cast<double>(e.end - e.start);
  return sum / static_cast<double>(events_.size());
}

FaultTimeline FaultTimeline::with_fixed_repair_duration() const {
  if (events_.empty()) return *this;
  auto repair =
      std::max<std::int64_t>(1, std::llround(mean_event_duration()));
  std::vector<FaultEvent> fixed;
  fixed.reserve(events_.size());
  for (const auto& e : events_)
    fixed.push_back({e.node_id, e.start, e.start + repair});
  return FaultTimeline(std::move(fixed), node_count_, horizon_);
}

FaultTimeline load_trace(std::istream& in, int expected_nodes) {
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) return FaultTimeline({}, std::max(0, expected_nodes));
  ++lineno;
  if (line != "node_id,start,end")
    throw ParseError("trace line 1: expected header 'node_id,start,end'");

  std::vector<FaultEvent> events;
  int max_node = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    FaultEvent e;
    char c1 = 0, c2 = 0;
    std::istringstream ls(line);
    if (!(ls >> e.node_id >> c1 >> e.start >> c2 >> e.end) || c1 != ',' ||
        c2 != ',') {
      std::ostringstream msg;
      msg << "trace line " << lineno << ": malformed row";
      throw ParseError(msg.str());
    }
    if (e.start < 0) {
      std::ostringstream msg;
      msg << "trace line " << lineno << ": negative start time";
      throw ParseError(msg.str());
    }
    if (e.end <= e.start) {
      std::ostringstream msg;
      msg << "trace line " << lineno << ": non-positive duration";
      throw ParseError(msg.str());
    }
    if (e.node_id < 0 ||
        (expected_nodes >= 0 && e.node_id >= expected_nodes)) {
      std::ostringstream msg;
      msg << "trace line " << lineno << ": unknown node " << e.node_id;
      throw ParseError(msg.str());
    }
    max_node = std::max(max_node, e.node_id);
    events.push_back(e);
  }
  int nodes = expected_nodes >= 0 ? expected_nodes : max_node + 1;
  return FaultTimeline(std::move(events), std::max(0, nodes));
}

FaultTimeline load_trace_file(const std::string& path, int expected_nodes) {
  std::ifstream in(path);
  if (!in) throw ParseError("trace: cannot open " + path);
  return load_trace(in, expected_nodes);
}

void save_trace(std::ostream& out, const FaultTimeline& timeline) {
  out << "node_id,start,end\n";
  for (const auto& e : timeline.events())
    out << e.node_id << ',' << e.start << ',' << e.end << '\n';
}

double FaultModelParams::node_prob() const {
  return node_fault_prob(p_gpu, gpus_per_node);
}

double gpu_fault_prob_from_node(double p_node, int gpus_per_node) {
  if (p_node < 0.0 || p_node >= 1.0)
    throw ConfigError("gpu_fault_prob_from_node: need 0 <= P_node < 1");
  if (gpus_per_node < 1)
    throw ConfigError("gpu_fault_prob_from_node: need R >= 1");
  // 1 - (1 - P)^(1/R), via log1p/expm1 for small probabilities.
  return -std::expm1(std::log1p(-p_node) / gpus_per_node);
}

double node_fault_prob(double p_gpu, int gpus_per_node) {
  if (p_gpu < 0.0 || p_gpu > 1.0)
    throw ConfigError("node_fault_prob: need 0 <= p <= 1");
  if (gpus_per_node < 1) throw ConfigError("node_fault_prob: need R >= 1");
  if (p_gpu == 1.0) return 1.0;
  return -std::expm1(static_cast<double>(gpus_per_node) * std::log1p(-p_gpu));
}

double split_inheritance_prob(double p8) {
  if (p8 < 0.0 || p8 >= 1.0)
    throw ConfigError("split_inheritance_prob: need 0 <= P8 < 1");
  if (p8 == 0.0) return 0.5;  // limit of (1 - sqrt(1-x)) / x
  return (1.0 - std::sqrt(1.0 - p8)) / p8;
}

FaultTimeline normalize_trace_8to4(const FaultTimeline& timeline,
                                   std::uint64_t seed) {
  return normalize_trace_8to4(timeline, seed,
                              split_inheritance_prob(timeline.mean_faulty_ratio()));
}

FaultTimeline normalize_trace_8to4(const FaultTimeline& timeline,
                                   std::uint64_t seed, double inherit_prob) {
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<FaultEvent> out;
  out.reserve(timeline.events().size());
  for (const auto& e : timeline.events()) {
    for (int child = 0; child < 2; ++child) {
      bool inherits = uni(rng) < inherit_prob;
      if (inherits)
        out.push_back({2 * e.node_id + child, e.start, e.end});
    }
  }
  return FaultTimeline(std::move(out), 2 * timeline.node_count(),
                       timeline.horizon());
}

FaultTimeline remap_trace_modulo(const FaultTimeline& timeline, int nodes) {
  if (nodes < 1) throw ConfigError("remap_trace_modulo: need nodes >= 1");
  if (timeline.node_count() <= nodes) return timeline;
  std::vector<FaultEvent> events;
  events.reserve(timeline.events().size());
  for (const auto& e : timeline.events())
    events.push_back({e.node_id % nodes, e.start, e.end});
  return FaultTimeline(std::move(events), nodes, timeline.horizon());
}

FaultTimeline synthesize_trace(const FaultModelParams& params, int nodes,
                               int steps, std::uint64_t seed) {
  return synthesize_trace_node_prob(params.node_prob(), nodes, steps, seed);
}

FaultTimeline synthesize_trace_node_prob(double node_prob, int nodes,
                                         int steps, std::uint64_t seed) {
  if (node_prob < 0.0 || node_prob > 1.0)
    throw ConfigError("synthesize_trace: need 0 <= P_s <= 1");
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<FaultEvent> events;
  for (std::int64_t t = 0; t < steps; ++t)
    for (int v = 0; v < nodes; ++v)
      if (uni(rng) < node_prob) events.push_back({v, t, t + 1});
  return FaultTimeline(std::move(events), nodes, steps);
}

std::vector<int> sample_fault_set(int nodes, double ratio,
                                  std::mt19937_64& rng, bool exact_count) {
  if (ratio < 0.0 || ratio > 1.0)
    throw ConfigError("sample_fault_set: need 0 <= ratio <= 1");
  std::vector<int> faulty;
  if (exact_count) {
    int want = static_cast<int>(std::llround(ratio * nodes));
    std::vector<int> ids(nodes);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    faulty.assign(ids.begin(), ids.begin() + want);
    std::sort(faulty.begin(), faulty.end());
  } else {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int v = 0; v < nodes; ++v)
      if (uni(rng) < ratio) faulty.push_back(v);
  }
  return faulty;
}

}  // namespace infhbd
