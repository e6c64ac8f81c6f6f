#pragma once

#include "threshnet/core.hpp"
#include "threshnet/graph.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace threshnet {

/// Ordered cut values, strictly increasing. `target_density` is either
/// empty or aligned with `thresholds` and records the edges-per-node target
/// that induced each cut.
class ThresholdLadder {
 public:
  ThresholdLadder() = default;

  explicit ThresholdLadder(std::vector<double> thresholds, std::vector<double> target_density = {})
      : thresholds_(std::move(thresholds)), targets_(std::move(target_density)) {
    if (thresholds_.empty()) throw std::invalid_argument("ThresholdLadder: empty ladder");
    if (!targets_.empty() && targets_.size() != thresholds_.size())
      throw std::invalid_argument("ThresholdLadder: target densities misaligned");
    for (std::size_t k = 0; k < thresholds_.size(); ++k) {
      if (!std::isfinite(thresholds_[k])) throw std::invalid_argument("ThresholdLadder: non-finite threshold");
      if (k > 0 && !(thresholds_[k] > thresholds_[k - 1]))
        throw std::invalid_argument("ThresholdLadder: thresholds must be strictly increasing");
    }
  }

  const std::vector<double>& thresholds() const { return thresholds_; }
  const std::vector<double>& target_density() const { return targets_; }
  std::size_t size() const { return thresholds_.size(); }
  double operator[](std::size_t k) const { return thresholds_[k]; }

 private:
  std::vector<double> thresholds_;
  std::vector<double> targets_;
};

/// Valued units per Phil at a given split.
struct UnitConversion {
  double factor = 1.0;
  std::optional<double> threshold;
  std::string unit_label;
};

enum class StatKind { ClosenessLike, DistanceLike };

/// Ties are the weights at or above `tau`.
inline BinaryGraph dichotomize(const ValuedGraph& g, double tau) {
  if (!std::isfinite(tau)) throw std::invalid_argument("dichotomize: threshold must be finite");
  const int n = g.n();
  AdjacencyMatrix a = AdjacencyMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && g.weight(i, j) >= tau) a(i, j) = 1;
  return BinaryGraph(std::move(a), g.directed(), tau);
}

namespace detail {

// Off-diagonal weights over ordered pairs; an undirected tie appears twice,
// matching BinaryGraph::arc_count.
inline std::vector<double> ordered_pair_weights(const ValuedGraph& g) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(g.n()) * (g.n() - 1));
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      if (i != j) out.push_back(g.weight(i, j));
  return out;
}

}  // namespace detail

/// Cut whose dichotomized graph has an arc count closest to target * n,
/// preferring the sparser graph on ties. Candidates are the distinct
/// positive weights.
inline double threshold_for_density(const ValuedGraph& g, double target) {
  const int n = g.n();
  if (!(target > 0.0) || target > n - 1)
    throw std::invalid_argument("threshold_for_density: target must lie in (0, n-1]");
  auto w = detail::ordered_pair_weights(g);
  std::sort(w.begin(), w.end(), std::greater<>());
  if (w.empty() || !(w.front() > 0.0)) throw Error("no nontrivial ladder: graph has no positive weights");

  const double goal = target * n;
  double best_tau = w.front();
  double best_gap = std::numeric_limits<double>::infinity();
  // Walk distinct values from the top; the arc count at value v is the
  // index one past the last occurrence of v.
  for (std::size_t k = 0; k < w.size() && w[k] > 0.0;) {
    std::size_t end = k;
    while (end < w.size() && w[end] == w[k]) ++end;
    const double gap = std::abs(static_cast<double>(end) - goal);
    if (gap < best_gap) {  // strict: earlier (sparser) cut wins ties
      best_gap = gap;
      best_tau = w[k];
    }
    k = end;
  }
  return best_tau;
}

/// One threshold per target, in the order given (duplicates kept).
inline std::vector<double> thresholds_for_densities(const ValuedGraph& g, const std::vector<double>& targets) {
  std::vector<double> out;
  out.reserve(targets.size());
  for (double t : targets) out.push_back(threshold_for_density(g, t));
  return out;
}

/// Sorted, deduplicated ladder. When several targets land on the same cut,
/// the first of them in input order is kept as its target.
inline ThresholdLadder ladder_for_densities(const ValuedGraph& g, const std::vector<double>& targets) {
  if (targets.empty()) throw std::invalid_argument("ladder_for_densities: no targets");
  std::vector<std::pair<double, double>> cuts;  // (tau, target)
  for (double t : targets) cuts.emplace_back(threshold_for_density(g, t), t);
  std::stable_sort(cuts.begin(), cuts.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<double> taus, dens;
  for (auto& [tau, t] : cuts) {
    if (!taus.empty() && taus.back() == tau) continue;
    taus.push_back(tau);
    dens.push_back(t);
  }
  return ThresholdLadder(std::move(taus), std::move(dens));
}

/// mean(tie group) - mean(non-tie group) over off-diagonal ordered pairs,
/// for an arbitrary binary image conformal with `g`.
inline UnitConversion conversion_factor(const ValuedGraph& g, const BinaryGraph& b) {
  if (b.n() != g.n()) throw std::invalid_argument("conversion_factor: graphs not conformal");
  double hi = 0.0, lo = 0.0;
  long nhi = 0, nlo = 0;
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      if (i == j) continue;
      if (b.has_edge(i, j)) {
        hi += g.weight(i, j);
        ++nhi;
      } else {
        lo += g.weight(i, j);
        ++nlo;
      }
    }
  if (nhi == 0 || nlo == 0) throw DegenerateSplit();
  const double factor = hi / nhi - lo / nlo;
  if (!(factor > 0.0)) throw DegenerateSplit();
  return {factor, b.source_threshold(), g.unit_label()};
}

inline UnitConversion conversion_factor(const ValuedGraph& g, double tau) {
  return conversion_factor(g, dichotomize(g, tau));
}

// Closeness-like statistics carry Phil and scale by c; distance-like
// statistics carry inverse Phil and scale by 1/c.
inline double to_valued_units(double stat, StatKind kind, const UnitConversion& c) {
  return kind == StatKind::ClosenessLike ? stat * c.factor : stat / c.factor;
}

namespace detail {

struct DisjointSets {
  std::vector<int> parent, size;
  int largest = 1;

  explicit DisjointSets(int n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0); }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    largest = std::max(largest, size[a]);
  }
};

}  // namespace detail

/// Largest distinct positive weight at which the dichotomized graph has a
/// weakly connected component of at least fraction * n nodes.
inline double giant_component_threshold(const ValuedGraph& g, double fraction = 0.5) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("giant_component_threshold: fraction must lie in (0, 1]");
  const int n = g.n();
  struct Tie {
    double w;
    int i, j;
  };
  std::vector<Tie> ties;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && g.weight(i, j) > 0.0 && (g.directed() || i < j)) ties.push_back({g.weight(i, j), i, j});
  std::sort(ties.begin(), ties.end(), [](const Tie& a, const Tie& b) { return a.w > b.w; });

  const double need = fraction * n;
  detail::DisjointSets sets(n);
  if (sets.largest >= need) {
    // fraction * n <= 1: any single node qualifies; the highest cut does.
    if (ties.empty()) throw Error("giant component never emerges: graph has no ties");
    return ties.front().w;
  }
  for (std::size_t k = 0; k < ties.size();) {
    const double w = ties[k].w;
    for (; k < ties.size() && ties[k].w == w; ++k) sets.unite(ties[k].i, ties[k].j);
    if (sets.largest >= need) return w;
  }
  throw Error("giant component never emerges at any threshold");
}

}  // namespace threshnet
