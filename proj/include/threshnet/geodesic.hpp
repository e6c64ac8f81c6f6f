#pragma once

#include "threshnet/graph.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace threshnet {

enum class DistanceKind { Geodesic, Ohmic };

/// n x n distances, +inf where unreachable, zero diagonal.
struct DistanceMatrix {
  Matrix d;
  DistanceKind kind = DistanceKind::Geodesic;

  int n() const { return static_cast<int>(d.rows()); }
};

enum class Statistic { HarmonicGeodesic, OhmicCloseness, FixedPowerBetweenness };

inline std::string to_string(Statistic s) {
  switch (s) {
    case Statistic::HarmonicGeodesic: return "harmonic_geodesic";
    case Statistic::OhmicCloseness: return "ohmic_closeness";
    case Statistic::FixedPowerBetweenness: return "fixed_power_betweenness";
  }
  return "";
}

struct CentralityVector {
  std::vector<double> values;
  Statistic statistic = Statistic::HarmonicGeodesic;
  std::string units;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// All-pairs shortest paths with edge length 1/w over positive weights.
/// Dense O(n^2) Dijkstra from every source; direction is respected.
template <GraphLike G>
DistanceMatrix geodesic_distances(const G& g) {
  const int n = g.n();
  constexpr double inf = std::numeric_limits<double>::infinity();
  Matrix len(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double w = g.weight(i, j);
      len(i, j) = (i != j && w > 0.0) ? 1.0 / w : inf;
    }

  DistanceMatrix out{Matrix::Constant(n, n, inf), DistanceKind::Geodesic};
  std::vector<char> done(n);
  for (int s = 0; s < n; ++s) {
    auto dist = out.d.row(s);
    std::fill(done.begin(), done.end(), 0);
    dist(s) = 0.0;
    for (int iter = 0; iter < n; ++iter) {
      int u = -1;
      double best = inf;
      for (int v = 0; v < n; ++v)
        if (!done[v] && dist(v) < best) {
          best = dist(v);
          u = v;
        }
      if (u < 0) break;
      done[u] = 1;
      for (int v = 0; v < n; ++v) {
        const double cand = best + len(u, v);
        if (!done[v] && cand < dist(v)) dist(v) = cand;
      }
    }
  }
  return out;
}

/// C(i) = sum_{j != i} (1/d(i,j) + 1/d(j,i)), unreachable pairs contribute 0.
inline CentralityVector harmonic_closeness(const DistanceMatrix& dm, std::string units = "Phil") {
  if (dm.kind != DistanceKind::Geodesic) throw std::invalid_argument("harmonic_closeness: geodesic distances required");
  const int n = dm.n();
  CentralityVector c{std::vector<double>(n, 0.0), Statistic::HarmonicGeodesic, std::move(units)};
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      s += 1.0 / dm.d(i, j);  // 1/inf == 0
      s += 1.0 / dm.d(j, i);
    }
    c.values[i] = s;
  }
  return c;
}

template <GraphLike G>
CentralityVector harmonic_closeness(const G& g) {
  return harmonic_closeness(geodesic_distances(g), units_of(g));
}

}  // namespace threshnet
