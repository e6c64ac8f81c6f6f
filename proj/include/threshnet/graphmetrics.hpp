#pragma once

#include "threshnet/circuit.hpp"
#include "threshnet/core.hpp"
#include "threshnet/geodesic.hpp"
#include "threshnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace threshnet {

/// Ranks 1..n, 1 = most central.
struct Ranking {
  std::vector<int> ranks;
  std::uint64_t tie_seed = 0;

  std::size_t size() const { return ranks.size(); }
  int operator[](std::size_t i) const { return ranks[i]; }
};

// Values within this relative distance share a rank block. Sums of the same
// reciprocal distances accumulated in different orders differ in the last
// bits and must still count as ties.
inline constexpr double kRankTieTolerance = 1e-9;

/// Descending ranks; each block of tied values receives a uniformly random
/// permutation of its ranks, fixed by `tie_seed`.
inline Ranking rank(const std::vector<double>& v, std::uint64_t tie_seed) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });

  auto rng = derive_rng(tie_seed);
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo + 1;
    while (hi < n) {
      const double a = v[order[hi - 1]], b = v[order[hi]];
      const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
      if (a != b && (a - b) > kRankTieTolerance * scale) break;
      ++hi;
    }
    if (hi - lo > 1) std::shuffle(order.begin() + lo, order.begin() + hi, rng);
    lo = hi;
  }

  Ranking r{std::vector<int>(n), tie_seed};
  for (std::size_t k = 0; k < n; ++k) r.ranks[order[k]] = static_cast<int>(k + 1);
  return r;
}

inline Ranking rank(const CentralityVector& v, std::uint64_t tie_seed) { return rank(v.values, tie_seed); }

/// D_ab = (1/N) sum_i (R_ai - R_bi)^2 / sqrt(R_ai R_bi).
inline double rank_discrepancy(const Ranking& a, const Ranking& b) {
  if (a.size() != b.size()) throw std::invalid_argument("rank_discrepancy: rankings differ in length");
  if (a.size() == 0) throw std::invalid_argument("rank_discrepancy: empty rankings");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ra = a[i], rb = b[i];
    s += (ra - rb) * (ra - rb) / std::sqrt(ra * rb);
  }
  return s / static_cast<double>(a.size());
}

/// Empty fields mean no connected pair exists.
struct Diameters {
  std::optional<double> geodesic_diameter;
  std::optional<double> ohmic_diameter;
  std::optional<double> inverse_geodesic_diameter;  // min nonzero 1/d
  std::optional<double> inverse_ohmic_diameter;     // min nonzero G

  bool defined() const { return geodesic_diameter.has_value(); }
};

inline Diameters diameters(const DistanceMatrix& geodesic, const CircuitModel& model) {
  Diameters out;
  double gmax = -1.0, rmax = -1.0;
  const int n = geodesic.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = geodesic.d(i, j);
      if (std::isfinite(d)) gmax = std::max(gmax, d);
      if (j > i && model.connected(i, j)) rmax = std::max(rmax, model.resistance(i, j));
    }
  if (gmax > 0.0) {
    out.geodesic_diameter = gmax;
    out.inverse_geodesic_diameter = 1.0 / gmax;
  }
  if (rmax > 0.0) {
    out.ohmic_diameter = rmax;
    out.inverse_ohmic_diameter = 1.0 / rmax;
  }
  return out;
}

template <GraphLike G>
Diameters diameters(const G& g) {
  return diameters(geodesic_distances(g), CircuitModel(g));
}

}  // namespace threshnet
