// SPDX-License-Identifier: Apache-2.0

#include "infhbd/collectives.hpp"

#include <algorithm>
#include <cmath>

#include "infhbd/error.hpp"

namespace infhbd {

void TrafficParams::validate() const {
  if (batch < 1 || seq_len < 1 || hidden < 1)
    throw ConfigError("traffic: b, s, h must be >= 1");
  if (top_k < 1 || parallel_size < 1)
    throw ConfigError("traffic: k and n must be >= 1");
  if (top_k > parallel_size)
    throw ConfigError("traffic: k must not exceed n");
}

double tp_allreduce_load(const TrafficParams& params) {
  params.validate();
  double n = params.parallel_size;
  return 2.0 * params.batch * params.seq_len * params.hidden * (n - 1.0) / n;
}

double ep_alltoall_load(const TrafficParams& params) {
  params.validate();
  double n = params.parallel_size;
  return tp_allreduce_load(params) * static_cast<double>(params.top_k) / n;
}

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(int v) {
  int l = 0;
  while ((1 << l) < v) ++l;
  return l;
}

}  // namespace

ExchangeSchedule binary_exchange_schedule(int group_size, int block_units) {
  if (!is_power_of_two(group_size) || group_size < 2)
    throw ConfigError("binary_exchange: group size must be a power of two >= 2");
  if (block_units < 1)
    throw ConfigError("binary_exchange: block units must be >= 1");

  const int p = group_size;
  const int levels = log2_exact(p);
  ExchangeSchedule schedule;
  schedule.group_size = p;
  schedule.block_units = block_units;
  schedule.rounds.resize(levels);
  for (int k = 1; k <= levels; ++k) {
    const int bit = 1 << (levels - k);
    const int commset_size = 1 << (k - 1);
    auto& round = schedule.rounds[k - 1];
    round.transfers.reserve(p);
    for (int i = 0; i < p; ++i) {
      const int partner = i ^ bit;
      ExchangeTransfer t;
      t.sender = i;
      t.receiver = partner;
      // Destinations in the partner's current subcube: the top k bits of the
      // block index match the partner's, giving a contiguous span of width
      // 2^(levels-k). Round 1 degenerates to the plain high-bit half-split.
      t.block_lo = (partner >> (levels - k)) << (levels - k);
      t.block_hi = t.block_lo + bit;
      t.units = static_cast<std::int64_t>(commset_size) * bit * block_units;
      round.transfers.push_back(t);
    }
  }
  return schedule;
}

std::vector<ExchangeState> simulate_exchange(const ExchangeSchedule& schedule) {
  const int p = schedule.group_size;
  const int m = schedule.block_units;
  std::vector<ExchangeState> states(p);
  for (int i = 0; i < p; ++i) {
    states[i].node = i;
    states[i].commset = {i};
    states[i].held.assign(p, std::vector<char>(p, 0));
    std::fill(states[i].held[i].begin(), states[i].held[i].end(), 1);
  }

  for (const auto& round : schedule.rounds) {
    // Stage all sends against the pre-round state, then apply: a round is a
    // barrier and both directions of a pair run concurrently.
    struct Delivery {
      int to;
      int origin;
      int block_lo, block_hi;
    };
    std::vector<Delivery> deliveries;
    std::vector<std::vector<int>> incoming_commset(p);
    for (auto& s : states) s.sent_per_round.push_back(0);

    for (const auto& t : round.transfers) {
      auto& sender = states[t.sender];
      std::int64_t sent = 0;
      for (int origin : sender.commset) {
        for (int b = t.block_lo; b < t.block_hi; ++b) {
          if (!sender.held[origin][b])
            throw ConfigError("binary_exchange: sender missing a staged block");
        }
        deliveries.push_back({t.receiver, origin, t.block_lo, t.block_hi});
        sent += static_cast<std::int64_t>(t.block_hi - t.block_lo) * m;
      }
      sender.sent_per_round.back() += sent;
      incoming_commset[t.receiver].insert(incoming_commset[t.receiver].end(),
                                          sender.commset.begin(),
                                          sender.commset.end());
    }

    for (const auto& d : deliveries)
      for (int b = d.block_lo; b < d.block_hi; ++b)
        states[d.to].held[d.origin][b] = 1;
    for (int i = 0; i < p; ++i) {
      auto& cs = states[i].commset;
      cs.insert(cs.end(), incoming_commset[i].begin(), incoming_commset[i].end());
      std::sort(cs.begin(), cs.end());
      cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    }
  }
  return states;
}

std::vector<std::vector<char>> delivered_blocks(
    const std::vector<ExchangeState>& states) {
  const int p = static_cast<int>(states.size());
  std::vector<std::vector<char>> out(p, std::vector<char>(p, 0));
  for (int i = 0; i < p; ++i)
    for (int origin = 0; origin < p; ++origin)
      out[i][origin] = states[i].held[origin][i];
  return out;
}

bool schedule_feasible(const ExchangeSchedule& schedule,
                       const ClusterTopology& topology) {
  for (const auto& round : schedule.rounds)
    for (const auto& t : round.transfers)
      if (!topology.has_edge(t.sender, t.receiver)) return false;
  return true;
}

double exchange_cost(int group_size, double block_units, double setup_time,
                     double per_unit_time) {
  if (!is_power_of_two(group_size) || group_size < 2)
    throw ConfigError("exchange_cost: group size must be a power of two >= 2");
  double levels = log2_exact(group_size);
  return setup_time * levels +
         0.5 * per_unit_time * block_units * group_size * levels;
}

double ring_alltoall_cost(int group_size, double block_units,
                          double setup_time, double per_unit_time) {
  double p = group_size;
  return setup_time * (p - 1.0) +
         per_unit_time * block_units * p * (p - 1.0) / 2.0;
}

bool check_radix_constraint(int tp_size, int ep_size, int gpus_per_node) {
  if (tp_size < 1 || ep_size < 1)
    throw ConfigError("radix: TP and EP sizes must be >= 1");
  long long product = static_cast<long long>(tp_size) * ep_size;
  if (gpus_per_node == 4) return product <= 64;
  if (gpus_per_node == 8) return product <= 2048;
  throw ConfigError("radix: unsupported GPUs per node (expected 4 or 8)");
}

}  // namespace infhbd
