#include "nodal_oracle.hpp"
#include "test_graphs.hpp"
#include "threshnet/circuit.hpp"
#include "threshnet/dichotomizer.hpp"
#include "threshnet/geodesic.hpp"
#include "threshnet/graphmetrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numeric>

using namespace threshnet;
using namespace threshnet::testing;

namespace {

Dense to_dense(const ValuedGraph& g) {
  Dense w(g.n(), std::vector<double>(g.n(), 0.0));
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) w[i][j] = g.weight(i, j);
  return w;
}

// Shortest path by enumerating every simple path.
double brute_force_distance(const ValuedGraph& g, int s, int t) {
  double best = INFINITY;
  std::vector<char> used(g.n(), 0);
  std::function<void(int, double)> walk = [&](int u, double len) {
    if (u == t) {
      best = std::min(best, len);
      return;
    }
    used[u] = 1;
    for (int v = 0; v < g.n(); ++v)
      if (!used[v] && g.weight(u, v) > 0.0) walk(v, len + 1.0 / g.weight(u, v));
    used[u] = 0;
  };
  walk(s, 0.0);
  return best;
}

bool is_tree(const ValuedGraph& g) {
  int edges = 0;
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j) edges += g.weight(i, j) > 0.0;
  return edges == g.n() - 1;
}

ValuedGraph random_tree(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.2, 4.0);
  Matrix m = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const int p = std::uniform_int_distribution<int>(0, i - 1)(rng);
    m(i, p) = m(p, i) = w(rng);
  }
  return ValuedGraph(m, false);
}

}  // namespace

// ---------------------------------------------------------------- geodesic

TEST(GeodesicDistances, SingleEdge) {
  const auto d = geodesic_distances(undirected(2, {{0, 1, 2.0}}));
  EXPECT_EQ(d.d(0, 1), 0.5);
  EXPECT_EQ(d.d(1, 0), 0.5);
  EXPECT_EQ(d.d(0, 0), 0.0);
}

TEST(GeodesicDistances, BinaryPath) {
  const auto d = geodesic_distances(path(3));
  EXPECT_EQ(d.d(0, 2), 2.0);
}

TEST(GeodesicDistances, UnreachableIsInfinite) {
  const auto d = geodesic_distances(undirected(3, {{0, 1, 1.0}}));
  EXPECT_TRUE(std::isinf(d.d(0, 2)));
  const auto dd = geodesic_distances(directed(2, {{0, 1, 1.0}}));
  EXPECT_EQ(dd.d(0, 1), 1.0);
  EXPECT_TRUE(std::isinf(dd.d(1, 0)));
}

TEST(GeodesicDistances, MatchesSimplePathEnumeration) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const auto g = random_graph(5, 0.5, rng);
    const auto d = geodesic_distances(g);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (i != j) {
          const double want = brute_force_distance(g, i, j);
          if (std::isinf(want))
            EXPECT_TRUE(std::isinf(d.d(i, j)));
          else
            EXPECT_NEAR(d.d(i, j), want, 1e-12 * want);
        }
  }
}

TEST(GeodesicDistances, TriangleInequality) {
  std::mt19937_64 rng(6);
  const auto g = random_graph(12, 0.3, rng);
  const auto d = geodesic_distances(g);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j)
      for (int k = 0; k < 12; ++k)
        if (std::isfinite(d.d(i, k)) && std::isfinite(d.d(k, j)))
          EXPECT_LE(d.d(i, j), d.d(i, k) + d.d(k, j) + 1e-12);
}

TEST(HarmonicCloseness, UnitTriangleIsFour) {
  const auto c = harmonic_closeness(unit_triangle());
  for (double v : c.values) EXPECT_DOUBLE_EQ(v, 4.0);
  EXPECT_EQ(c.units, "units");
  EXPECT_EQ(harmonic_closeness(dichotomize(unit_triangle(), 1.0)).units, "Phil");
}

TEST(HarmonicCloseness, EmptyAndIsolated) {
  for (double v : harmonic_closeness(ValuedGraph(Matrix::Zero(4, 4), false)).values) EXPECT_EQ(v, 0.0);
  const auto c = harmonic_closeness(undirected(4, {{0, 1, 1.0}, {1, 2, 1.0}}));
  EXPECT_EQ(c[3], 0.0);
  EXPECT_DOUBLE_EQ(c[1], 4.0);
  EXPECT_DOUBLE_EQ(c[0], 3.0);
}

TEST(HarmonicCloseness, CountsBothDirections) {
  const auto c = harmonic_closeness(directed(2, {{0, 1, 2.0}}));
  EXPECT_DOUBLE_EQ(c[0], 2.0);
  EXPECT_DOUBLE_EQ(c[1], 2.0);
}

// ------------------------------------------------------------------ ohmic

TEST(EffectiveConductance, SingleEdge) {
  EXPECT_DOUBLE_EQ(effective_conductance(undirected(2, {{0, 1, 3.5}}), 0, 1), 3.5);
}

TEST(EffectiveConductance, UnitTriangle) {
  const CircuitModel m(unit_triangle());
  EXPECT_NEAR(m.resistance(0, 1), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.conductance(0, 1), 1.5, 1e-14);
}

TEST(EffectiveConductance, DisconnectedPairIsZero) {
  const CircuitModel m(undirected(4, {{0, 1, 1.0}, {2, 3, 1.0}}));
  EXPECT_EQ(m.conductance(0, 2), 0.0);
  EXPECT_TRUE(std::isinf(m.resistance(0, 2)));
  EXPECT_THROW(m.conductance(1, 1), std::invalid_argument);
}

TEST(EffectiveConductance, SeriesParallelReduction) {
  // 0-1 (2) in series with 1-2 (2), parallel to direct 0-2 (1): G = 1 + 1 = 2.
  const auto g = undirected(3, {{0, 1, 2.0}, {1, 2, 2.0}, {0, 2, 1.0}});
  EXPECT_NEAR(effective_conductance(g, 0, 2), 2.0, 1e-14);
}

TEST(EffectiveConductance, MatchesNodalOracle) {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 2 + rep % 6;
    const auto g = random_graph(n, 0.4, rng, true);
    const CircuitModel m(g);
    const auto w = to_dense(g);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        const double want = 1.0 / nodal_resistance(w, a, b);
        EXPECT_NEAR(m.conductance(a, b), want, 1e-10 * want);
      }
  }
}

TEST(EffectiveConductance, DirectedGraphsAreSymmetrizedByAveraging) {
  const auto d = directed(3, {{0, 1, 2.0}, {1, 2, 4.0}, {2, 1, 2.0}});
  const auto s = undirected(3, {{0, 1, 1.0}, {1, 2, 3.0}});
  const CircuitModel md(d), ms(s);
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) EXPECT_NEAR(md.resistance(a, b), ms.resistance(a, b), 1e-14);
}

TEST(EffectiveResistance, BoundedByGeodesicWithEqualityOnTrees) {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 40; ++rep) {
    const auto g = rep % 2 ? random_tree(8, rng) : random_graph(8, 0.4, rng, true);
    const CircuitModel m(g);
    const auto d = geodesic_distances(g);
    for (int a = 0; a < 8; ++a)
      for (int b = a + 1; b < 8; ++b) {
        EXPECT_LE(m.resistance(a, b), d.d(a, b) * (1 + 1e-12));
        if (is_tree(g)) EXPECT_NEAR(m.resistance(a, b), d.d(a, b), 1e-12 * d.d(a, b));
      }
  }
}

TEST(EffectiveResistance, IsAMetricPerComponent) {
  std::mt19937_64 rng(13);
  const auto g = random_graph(10, 0.35, rng, true);
  const auto r = ohmic_distances(CircuitModel(g));
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(r.d(i, i), 0.0, 1e-12);
    for (int j = 0; j < 10; ++j) {
      EXPECT_NEAR(r.d(i, j), r.d(j, i), 1e-12);
      for (int k = 0; k < 10; ++k) EXPECT_LE(r.d(i, j), r.d(i, k) + r.d(k, j) + 1e-12);
    }
  }
}

TEST(OhmicCloseness, UnitTriangleIsThree) {
  for (double v : ohmic_closeness(unit_triangle()).values) EXPECT_NEAR(v, 3.0, 1e-13);
}

TEST(OhmicCloseness, EmptyGraphIsZero) {
  for (double v : ohmic_closeness(ValuedGraph(Matrix::Zero(5, 5), false)).values) EXPECT_EQ(v, 0.0);
}

TEST(OhmicCloseness, UnitStar) {
  for (int n : {3, 5, 9}) {
    const auto c = ohmic_closeness(star(n));
    EXPECT_NEAR(c[0], n - 1.0, 1e-12);
    for (int i = 1; i < n; ++i) EXPECT_NEAR(c[i], 1.0 + (n - 2) * 0.5, 1e-12);
  }
}

TEST(FlowSolution, ResidualAndConservation) {
  std::mt19937_64 rng(40);
  for (int rep = 0; rep < 20; ++rep) {
    const auto g = random_graph(9, 0.3, rng, true);
    const CircuitModel m(g);
    for (int a = 0; a < 9; ++a)
      for (int b = 0; b < 9; ++b) {
        if (a == b) continue;
        const auto f = solve_flow(m, a, b);
        Vector inj = Vector::Zero(9);
        inj(a) = f.injected_current;
        inj(b) = -f.injected_current;
        EXPECT_LE((m.net_outflow(f.potentials) - inj).norm(), 1e-9 * inj.norm());
        Vector net = Vector::Zero(9);
        for (const auto& c : f.currents) {
          net(c.from) += c.amps;
          net(c.to) -= c.amps;
        }
        for (int i = 0; i < 9; ++i)
          if (i != a && i != b) EXPECT_NEAR(net(i), 0.0, 1e-9);
        // Unit power.
        EXPECT_NEAR(f.injected_current * f.injected_current / m.conductance(a, b), 1.0, 1e-12);
      }
  }
}

TEST(FixedPowerBetweenness, PathMiddleCarriesFullCurrent) {
  const CircuitModel m(path(3));
  const auto f = solve_flow(m, 0, 2);
  const auto t = throughflow(f, 3);
  EXPECT_NEAR(t(1), f.injected_current, 1e-14);
}

TEST(FixedPowerBetweenness, AutomorphicNodesAgree) {
  for (const auto& g : {ring(7, 1.3), unit_triangle()}) {
    const auto c = fixed_power_betweenness(g);
    for (std::size_t i = 1; i < c.size(); ++i) EXPECT_NEAR(c[i], c[0], 1e-10 * c[0]);
  }
  const auto s = fixed_power_betweenness(star(6));
  for (int i = 2; i < 6; ++i) EXPECT_NEAR(s[i], s[1], 1e-10 * s[1]);
  EXPECT_GT(s[0], s[1]);
}

TEST(FixedPowerBetweenness, FourNodeToyMatchesNodalAnalysis) {
  const auto g = undirected(4, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 1.0}, {0, 3, 3.0}, {0, 2, 0.5}});
  const auto want = nodal_fixed_power_betweenness(to_dense(g));
  const auto got = fixed_power_betweenness(g);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(got[i], want[i], 1e-10 * want[i]);
}

TEST(FixedPowerBetweenness, MatchesNodalOracleUpToSixNodes) {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 80; ++rep) {
    const int n = 2 + rep % 5;
    const auto g = random_graph(n, 0.5, rng, true);
    const auto want = nodal_fixed_power_betweenness(to_dense(g));
    const auto got = fixed_power_betweenness(g);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(got[i], want[i], 1e-8 * std::abs(want[i]));
  }
}

TEST(FixedPowerBetweenness, SkipsDisconnectedPairs) {
  // Two disjoint unit edges: each node only pairs with its partner.
  const auto c = fixed_power_betweenness(undirected(4, {{0, 1, 1.0}, {2, 3, 1.0}}));
  const auto single = fixed_power_betweenness(undirected(2, {{0, 1, 1.0}}));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(c[i], single[0], 1e-14);
}

TEST(ScaleInvariance, DistancesConductancesAndRankings) {
  std::mt19937_64 rng(91);
  const auto g = random_graph(10, 0.4, rng, true);
  const double k = 3.7;
  const auto gk = g.scaled(k);
  const auto d = geodesic_distances(g), dk = geodesic_distances(gk);
  const CircuitModel m(g), mk(gk);
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      EXPECT_NEAR(dk.d(i, j), d.d(i, j) / k, 1e-12 * d.d(i, j));
      EXPECT_NEAR(mk.conductance(i, j), k * m.conductance(i, j), 1e-10 * m.conductance(i, j));
    }
  EXPECT_EQ(rank(harmonic_closeness(g), 1).ranks, rank(harmonic_closeness(gk), 1).ranks);
  EXPECT_EQ(rank(ohmic_closeness(g), 1).ranks, rank(ohmic_closeness(gk), 1).ranks);
  EXPECT_EQ(rank(fixed_power_betweenness(g), 1).ranks, rank(fixed_power_betweenness(gk), 1).ranks);
}

// -------------------------------------------------------------- diameters

TEST(Diameters, PathAndTriangle) {
  EXPECT_EQ(*diameters(path(3)).geodesic_diameter, 2.0);
  const auto t = diameters(unit_triangle());
  EXPECT_NEAR(*t.ohmic_diameter, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(*t.inverse_ohmic_diameter, 1.5, 1e-14);
  EXPECT_EQ(*t.geodesic_diameter, 1.0);
  EXPECT_EQ(*t.inverse_geodesic_diameter, 1.0);
}

TEST(Diameters, EmptyGraphUndefined) {
  const auto d = diameters(ValuedGraph(Matrix::Zero(4, 4), false));
  EXPECT_FALSE(d.defined());
  EXPECT_FALSE(d.ohmic_diameter.has_value());
  EXPECT_FALSE(d.inverse_geodesic_diameter.has_value());
}

TEST(Diameters, LineIsAboutTwiceRing) {
  for (int n : {20, 40, 80}) {
    const double ratio = *diameters(path(n)).geodesic_diameter / *diameters(ring(n)).geodesic_diameter;
    EXPECT_NEAR(ratio, 2.0, 2.0 / n + 1e-12);
  }
}

TEST(Diameters, IgnoresUnreachablePairs) {
  const auto d = diameters(undirected(5, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 0.25}}));
  EXPECT_EQ(*d.geodesic_diameter, 4.0);
  EXPECT_NEAR(*d.ohmic_diameter, 4.0, 1e-12);
}

// ---------------------------------------------------------------- ranking

TEST(Rank, StrictlyDecreasingIsIdentity) {
  const auto r = rank(std::vector<double>{9.0, 7.5, 3.0, -1.0}, 5);
  EXPECT_EQ(r.ranks, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(rank(std::vector<double>{1.0, 3.0, 2.0}, 5).ranks, (std::vector<int>{3, 1, 2}));
}

TEST(Rank, AlwaysAPermutation) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> u(0, 3);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> v(11);
    for (auto& x : v) x = u(rng);
    auto r = rank(v, rep).ranks;
    std::sort(r.begin(), r.end());
    for (int i = 0; i < 11; ++i) EXPECT_EQ(r[i], i + 1);
  }
}

TEST(Rank, AllEqualGivesUniformPermutation) {
  const int n = 6, seeds = 6000;
  std::vector<double> mean(n, 0.0);
  const std::vector<double> v(n, 2.0);
  for (int s = 0; s < seeds; ++s) {
    const auto r = rank(v, s);
    for (int i = 0; i < n; ++i) mean[i] += r[i];
  }
  // sd of a uniform rank on 1..6 is ~1.71; standard error ~0.022.
  for (double m : mean) EXPECT_NEAR(m / seeds, (n + 1) / 2.0, 0.12);
}

TEST(Rank, SingleTiePairSplitsEvenly) {
  const std::vector<double> v{5.0, 3.0, 3.0, 1.0};
  int first = 0;
  const int seeds = 4000;
  for (int s = 0; s < seeds; ++s) {
    const auto r = rank(v, s);
    EXPECT_EQ(r[0], 1);
    EXPECT_EQ(r[3], 4);
    first += r[1] == 2;
  }
  EXPECT_NEAR(static_cast<double>(first) / seeds, 0.5, 0.04);
}

TEST(Rank, NearlyEqualValuesTie) {
  const std::vector<double> v{1.0, 1.0 + 1e-13, 0.5};
  int swapped = 0;
  for (int s = 0; s < 200; ++s) swapped += rank(v, s)[0] == 2;
  EXPECT_GT(swapped, 50);
  EXPECT_LT(swapped, 150);
}

TEST(Rank, DeterministicGivenSeed) {
  const std::vector<double> v(20, 1.0);
  EXPECT_EQ(rank(v, 42).ranks, rank(v, 42).ranks);
  EXPECT_NE(rank(v, 42).ranks, rank(v, 43).ranks);
}

TEST(RankDiscrepancy, WorkedValues) {
  const Ranking a{{1, 2}, 0}, b{{2, 1}, 0};
  EXPECT_NEAR(rank_discrepancy(a, b), 1.0 / std::sqrt(2.0), 1e-15);
  const Ranking c{{1, 2, 3}, 0}, d{{3, 2, 1}, 0};
  EXPECT_NEAR(rank_discrepancy(c, d), 8.0 / (3.0 * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(rank_discrepancy(c, d), 1.5396, 5e-5);
}

TEST(RankDiscrepancy, SymmetricNonnegativeZeroIffEqual) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<int> p(8), q(8);
    std::iota(p.begin(), p.end(), 1);
    q = p;
    std::shuffle(p.begin(), p.end(), rng);
    std::shuffle(q.begin(), q.end(), rng);
    const Ranking a{p, 0}, b{q, 0};
    const double dab = rank_discrepancy(a, b);
    EXPECT_EQ(dab, rank_discrepancy(b, a));
    EXPECT_GE(dab, 0.0);
    EXPECT_EQ(dab == 0.0, p == q);
    EXPECT_EQ(rank_discrepancy(a, a), 0.0);
  }
}

TEST(RankDiscrepancy, MismatchedLengthsRejected) {
  EXPECT_THROW(rank_discrepancy(Ranking{{1, 2}, 0}, Ranking{{1, 2, 3}, 0}), std::invalid_argument);
}
