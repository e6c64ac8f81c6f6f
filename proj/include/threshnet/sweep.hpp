#pragma once

#include "threshnet/comparison.hpp"
#include "threshnet/core.hpp"
#include "threshnet/dichotomizer.hpp"
#include "threshnet/graph.hpp"
#include "threshnet/netgen.hpp"
#include "threshnet/parallel.hpp"
#include "threshnet/table.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace threshnet {

/// Cut positions for a sweep: either fixed valued thresholds, or
/// edges-per-node targets resolved per graph. Steps are ordered by rising
/// threshold (falling density).
struct LadderSpec {
  std::vector<double> thresholds;
  std::vector<double> density_targets;

  static LadderSpec fixed(std::vector<double> taus) {
    LadderSpec s;
    s.thresholds = ThresholdLadder(std::move(taus)).thresholds();
    return s;
  }

  static LadderSpec densities(std::vector<double> targets) {
    if (targets.empty()) throw std::invalid_argument("LadderSpec: no density targets");
    std::sort(targets.begin(), targets.end(), std::greater<>());
    LadderSpec s;
    s.density_targets = std::move(targets);
    return s;
  }

  bool by_density() const { return !density_targets.empty(); }
  std::size_t steps() const { return by_density() ? density_targets.size() : thresholds.size(); }

  void validate() const {
    if (by_density() == !thresholds.empty())
      throw std::invalid_argument("LadderSpec: give exactly one of thresholds or density targets");
    if (!by_density()) ThresholdLadder{thresholds};
  }

  std::vector<double> resolve(const ValuedGraph& g) const {
    return by_density() ? thresholds_for_densities(g, density_targets) : thresholds;
  }
};

/// Geometric ladder of edges-per-node targets from `lo` to `hi`.
inline std::vector<double> geometric_targets(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw std::invalid_argument("geometric_targets: bad range");
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k)
    out[k] = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
  return out;
}

struct SweepConfig {
  GenConfig gen;
  int replicates = 10;
  LadderSpec ladder;
  std::vector<SweepStatistic> statistics{kAllSweepStatistics.begin(), kAllSweepStatistics.end()};
  std::uint64_t master_seed = 1;
  int threads = 1;

  void validate() const {
    gen.validate();
    ladder.validate();
    if (replicates < 1) throw std::invalid_argument("SweepConfig: replicates must be at least 1");
    if (statistics.empty()) throw std::invalid_argument("SweepConfig: no statistics");
  }
};

struct SweepCell {
  int replicate = 0;
  int step = 0;
  double threshold = 0.0;
  double edges_per_node = 0.0;
  SweepStatistic statistic = SweepStatistic::HarmonicRank;
  std::optional<double> discrepancy;  // empty when undefined at this cut
};

struct ConversionRecord {
  int replicate = 0;
  int step = 0;
  double threshold = 0.0;
  double edges_per_node = 0.0;
  std::optional<double> factor;
};

struct Optimum {
  SweepStatistic statistic = SweepStatistic::HarmonicRank;
  int step = 0;
  double threshold = 0.0;       // mean over replicates contributing to the step
  double edges_per_node = 0.0;  // likewise
  double mean_discrepancy = 0.0;
  int cells = 0;
};

struct SweepResult {
  int replicates = 0;
  LadderSpec ladder;
  std::vector<SweepStatistic> statistics;
  std::vector<SweepCell> cells;  // ordered by (replicate, step, statistic)
  std::vector<ConversionRecord> conversions;
};

struct GraphSweep {
  std::vector<SweepCell> cells;
  std::vector<ConversionRecord> conversions;
};

/// Compares every cut of one valued graph against the graph itself.
inline GraphSweep sweep_graph(const ValuedGraph& g, const std::vector<double>& thresholds,
                              const std::vector<SweepStatistic>& stats, std::uint64_t tie_seed, int replicate = 0) {
  const ValuedReference ref(g, stats, tie_seed);
  GraphSweep out;
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    const BinaryGraph b = dichotomize(g, thresholds[k]);
    const double epn = b.edges_per_node();
    const auto disc = ref.compare(b);
    for (std::size_t s = 0; s < stats.size(); ++s)
      out.cells.push_back({replicate, static_cast<int>(k), thresholds[k], epn, stats[s], disc[s]});
    ConversionRecord rec{replicate, static_cast<int>(k), thresholds[k], epn, std::nullopt};
    try {
      rec.factor = conversion_factor(g, b).factor;
    } catch (const DegenerateSplit&) {
    }
    out.conversions.push_back(rec);
  }
  return out;
}

inline GenConfig replicate_config(const GenConfig& gen, std::uint64_t master_seed, int replicate) {
  GenConfig c = gen;
  c.seed = derive_seed(master_seed, static_cast<std::uint64_t>(replicate), 0);
  return c;
}

inline std::uint64_t replicate_tie_seed(std::uint64_t master_seed, int replicate) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(replicate), 1);
}

/// Generates `replicates` valued graphs and compares each with its own
/// dichotomized images at every ladder step.
inline SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<GraphSweep> parts(cfg.replicates);
  parallel_for(parts.size(), cfg.threads, [&](std::size_t r) {
    const int rep = static_cast<int>(r);
    const ValuedGraph g = sample_graph(replicate_config(cfg.gen, cfg.master_seed, rep));
    parts[r] = sweep_graph(g, cfg.ladder.resolve(g), cfg.statistics, replicate_tie_seed(cfg.master_seed, rep), rep);
  });
  SweepResult res{cfg.replicates, cfg.ladder, cfg.statistics, {}, {}};
  for (auto& p : parts) {
    res.cells.insert(res.cells.end(), p.cells.begin(), p.cells.end());
    res.conversions.insert(res.conversions.end(), p.conversions.begin(), p.conversions.end());
  }
  return res;
}

/// Sweep of a single given graph (real data), as one replicate.
inline SweepResult sweep_valued_graph(const ValuedGraph& g, const LadderSpec& ladder,
                                      const std::vector<SweepStatistic>& stats, std::uint64_t seed) {
  ladder.validate();
  auto part = sweep_graph(g, ladder.resolve(g), stats, replicate_tie_seed(seed, 0), 0);
  return SweepResult{1, ladder, stats, std::move(part.cells), std::move(part.conversions)};
}

/// Step with the lowest discrepancy averaged over the replicates that
/// define it (missing cells are excluded, not imputed). Exact ties go to
/// the later step, i.e. the higher threshold and sparser graph.
inline Optimum optimal_threshold(const SweepResult& r, SweepStatistic stat) {
  if (std::find(r.statistics.begin(), r.statistics.end(), stat) == r.statistics.end())
    throw std::invalid_argument("optimal_threshold: statistic not in result");
  const std::size_t steps = r.ladder.steps();
  std::vector<double> sum(steps, 0.0), tau(steps, 0.0), epn(steps, 0.0);
  std::vector<int> count(steps, 0);
  for (const auto& c : r.cells) {
    if (c.statistic != stat || !c.discrepancy) continue;
    sum[c.step] += *c.discrepancy;
    tau[c.step] += c.threshold;
    epn[c.step] += c.edges_per_node;
    ++count[c.step];
  }
  std::optional<Optimum> best;
  for (std::size_t k = 0; k < steps; ++k) {
    if (count[k] == 0) continue;
    const double mean = sum[k] / count[k];
    if (!best || mean <= best->mean_discrepancy)
      best = Optimum{stat, static_cast<int>(k), tau[k] / count[k], epn[k] / count[k], mean, count[k]};
  }
  if (!best) throw Error("optimal_threshold: every cell is missing for " + to_string(stat));
  return *best;
}

inline Table results_table(const SweepResult& r) {
  Table t({"replicate", "step", "target_density", "threshold", "edges_per_node", "statistic", "discrepancy"});
  for (const auto& c : r.cells) {
    Table::Row row;
    row.add(c.replicate).add(c.step);
    if (r.ladder.by_density())
      row.add(r.ladder.density_targets[c.step]);
    else
      row.add("NA");
    row.add(c.threshold).add(c.edges_per_node).add(to_string(c.statistic)).add(c.discrepancy);
    t.push(std::move(row));
  }
  return t;
}

inline Table conversions_table(const SweepResult& r) {
  Table t({"replicate", "step", "threshold", "edges_per_node", "factor"});
  for (const auto& c : r.conversions) {
    Table::Row row;
    row.add(c.replicate).add(c.step).add(c.threshold).add(c.edges_per_node).add(c.factor);
    t.push(std::move(row));
  }
  return t;
}

inline Table optima_table(const SweepResult& r) {
  Table t({"statistic", "step", "threshold", "edges_per_node", "mean_discrepancy", "cells"});
  for (auto s : r.statistics) {
    Table::Row row;
    row.add(to_string(s));
    try {
      const Optimum o = optimal_threshold(r, s);
      row.add(o.step).add(o.threshold).add(o.edges_per_node).add(o.mean_discrepancy).add(o.cells);
    } catch (const Error&) {
      row.add("NA").add("NA").add("NA").add("NA").add(0);
    }
    t.push(std::move(row));
  }
  return t;
}

struct LayerEdge {
  int source, target;
  double weight;
};

struct Layer {
  double threshold;
  std::vector<LayerEdge> edges;
};

/// Edges surviving at each ladder threshold. Layers are nested: a later
/// (higher) threshold keeps a subset of the previous layer's edges.
inline std::vector<Layer> export_layers(const ValuedGraph& g, const ThresholdLadder& ladder) {
  std::vector<Layer> out;
  for (double tau : ladder.thresholds()) {
    Layer layer{tau, {}};
    for (int i = 0; i < g.n(); ++i)
      for (int j = g.directed() ? 0 : i + 1; j < g.n(); ++j)
        if (i != j && g.weight(i, j) >= tau) layer.edges.push_back({i, j, g.weight(i, j)});
    out.push_back(std::move(layer));
  }
  return out;
}

inline Table layers_table(const std::vector<Layer>& layers) {
  Table t({"layer", "threshold", "source", "target", "weight"});
  for (std::size_t k = 0; k < layers.size(); ++k)
    for (const auto& e : layers[k].edges) {
      Table::Row row;
      row.add(k).add(layers[k].threshold).add(e.source).add(e.target).add(e.weight);
      t.push(std::move(row));
    }
  return t;
}

}  // namespace threshnet
