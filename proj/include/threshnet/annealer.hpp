#pragma once

#include "threshnet/comparison.hpp"
#include "threshnet/core.hpp"
#include "threshnet/dichotomizer.hpp"
#include "threshnet/graph.hpp"
#include "threshnet/table.hpp"

#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace threshnet {

struct AnnealConfig {
  SweepStatistic energy = SweepStatistic::HarmonicRank;
  double initial_temperature = 1.0;
  double cooling = 0.999;  // geometric factor applied every step
  int steps = 10000;
  // When positive, jump back to the best state every this many steps.
  int restart_interval = 0;
  std::uint64_t seed = 1;
  std::uint64_t tie_seed = 1;

  void validate() const {
    if (!(initial_temperature > 0.0)) throw std::invalid_argument("AnnealConfig: temperature must be positive");
    if (!(cooling > 0.0 && cooling < 1.0)) throw std::invalid_argument("AnnealConfig: cooling must lie in (0, 1)");
    if (steps < 1) throw std::invalid_argument("AnnealConfig: steps must be at least 1");
    if (restart_interval < 0) throw std::invalid_argument("AnnealConfig: negative restart interval");
  }
};

struct AnnealResult {
  BinaryGraph best;
  double best_energy = 0.0;
  std::vector<double> best_trace;      // best energy after each step (index 0 = initial state)
  std::vector<double> accepted_trace;  // energy of each accepted state, in order
  int accepted = 0;
};

/// Pairs eligible for flipping: positive valued weight; one entry per
/// undirected edge.
inline std::vector<std::pair<int, int>> candidate_pairs(const ValuedGraph& g) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < g.n(); ++i)
    for (int j = g.directed() ? 0 : i + 1; j < g.n(); ++j)
      if (i != j && g.weight(i, j) > 0.0) out.emplace_back(i, j);
  return out;
}

/// Energy of a binary image against its valued parent for one statistic;
/// undefined comparisons (degenerate splits, undefined diameters) score +inf.
class DiscrepancyEnergy {
 public:
  DiscrepancyEnergy(const ValuedGraph& g, SweepStatistic stat, std::uint64_t tie_seed)
      : ref_(g, {stat}, tie_seed) {}

  double operator()(const BinaryGraph& b) const {
    const auto d = ref_.compare(b)[0];
    return d ? *d : std::numeric_limits<double>::infinity();
  }

 private:
  ValuedReference ref_;
};

/// Metropolis search over binary graphs by single-pair flips restricted to
/// the valued support, accepting with probability min(1, exp(-dE/T)) under
/// geometric cooling. Returns the best state seen.
template <typename Energy>
  requires std::invocable<const Energy&, const BinaryGraph&>
AnnealResult anneal_binary(const ValuedGraph& g, const BinaryGraph& init, const AnnealConfig& cfg,
                           const Energy& energy) {
  cfg.validate();
  if (init.n() != g.n() || init.directed() != g.directed())
    throw std::invalid_argument("anneal_binary: initial state not conformal with the valued graph");

  AnnealResult res;
  BinaryGraph current = init;
  double e_cur = energy(current);
  res.best = current;
  res.best_energy = e_cur;
  res.best_trace.push_back(e_cur);
  res.accepted_trace.push_back(e_cur);

  const auto cands = candidate_pairs(g);
  if (cands.empty()) return res;

  auto rng = derive_rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double temp = cfg.initial_temperature;

  for (int step = 1; step <= cfg.steps; ++step) {
    const auto [i, j] = cands[pick(rng)];
    current.flip(i, j);
    const double e_new = energy(current);
    const double delta = e_new - e_cur;
    // Two infinite energies compare as no change; leaving +inf is always taken.
    bool accept;
    if (std::isinf(e_cur) && std::isinf(e_new))
      accept = true;
    else if (!(delta > 0.0))
      accept = true;
    else
      accept = unit(rng) < std::exp(-delta / temp);

    if (accept) {
      e_cur = e_new;
      ++res.accepted;
      res.accepted_trace.push_back(e_cur);
      if (e_cur < res.best_energy) {
        res.best_energy = e_cur;
        res.best = current;
      }
    } else {
      current.flip(i, j);
    }
    res.best_trace.push_back(res.best_energy);
    temp *= cfg.cooling;
    if (cfg.restart_interval > 0 && step % cfg.restart_interval == 0) {
      current = res.best;
      e_cur = res.best_energy;
    }
  }
  return res;
}

inline AnnealResult anneal_binary(const ValuedGraph& g, const BinaryGraph& init, const AnnealConfig& cfg) {
  const DiscrepancyEnergy energy(g, cfg.energy, cfg.tie_seed);
  return anneal_binary(g, init, cfg, energy);
}

/// Exhaustive minimum over every subset of the candidate pairs, with pairs
/// outside the candidate set held as in `base`. Feasible for up to ~20 pairs.
template <typename Energy>
std::pair<BinaryGraph, double> exhaustive_minimum(const ValuedGraph& g, const BinaryGraph& base, const Energy& energy) {
  const auto cands = candidate_pairs(g);
  if (cands.size() > 24) throw std::invalid_argument("exhaustive_minimum: too many candidate pairs");
  BinaryGraph state = base;
  for (auto [i, j] : cands)
    if (state.has_edge(i, j)) state.flip(i, j);
  BinaryGraph best = state;
  double best_e = energy(state);
  // Gray code: each step flips exactly one pair.
  const std::uint64_t total = std::uint64_t{1} << cands.size();
  for (std::uint64_t k = 1; k < total; ++k) {
    const int bit = std::countr_zero(k);
    state.flip(cands[bit].first, cands[bit].second);
    const double e = energy(state);
    if (e < best_e) {
      best_e = e;
      best = state;
    }
  }
  return {best, best_e};
}

inline Table anneal_trace_table(const AnnealResult& r) {
  Table t({"iteration", "best_energy"});
  for (std::size_t k = 0; k < r.best_trace.size(); ++k) {
    Table::Row row;
    row.add(k).add(r.best_trace[k]);
    t.push(std::move(row));
  }
  return t;
}

}  // namespace threshnet
