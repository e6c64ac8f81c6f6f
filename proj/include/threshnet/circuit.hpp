#pragma once

#include "threshnet/core.hpp"
#include "threshnet/geodesic.hpp"
#include "threshnet/graph.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace threshnet {

/// A graph read as a resistor network: weights are conductances, directed
/// inputs are symmetrized by averaging w_ij and w_ji. Each connected
/// component is grounded at its lowest-index node and the reduced
/// Laplacian is inverted once, which yields every effective resistance and
/// every pair's potentials without forming the full pseudoinverse.
class CircuitModel {
 public:
  struct Edge {
    int to;
    double conductance;
  };

  // Conductances below this fraction of the largest are treated as open;
  // they would otherwise put the reduced Laplacian below pivot tolerance.
  static constexpr double kConductanceFloor = 1e-12;
  static constexpr double kPivotTolerance = 1e-12;

  template <GraphLike G>
  explicit CircuitModel(const G& g) : n_(g.n()), adj_(g.n()), component_(g.n(), -1), local_(g.n(), -1) {
    Matrix c(n_, n_);
    double cmax = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        c(i, j) = i == j ? 0.0 : 0.5 * (g.weight(i, j) + g.weight(j, i));
        cmax = std::max(cmax, c(i, j));
      }
    const double floor = kConductanceFloor * cmax;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (i != j && c(i, j) > floor) adj_[i].push_back({j, c(i, j)});
    label_components();
    for (auto& comp : members_) invert_component(comp);
  }

  int n() const { return n_; }
  int component(int i) const { return component_[i]; }
  const std::vector<std::vector<int>>& components() const { return members_; }
  const std::vector<Edge>& neighbors(int i) const { return adj_[i]; }
  bool connected(int i, int j) const { return component_[i] == component_[j]; }

  /// Two-terminal effective resistance; +inf across components, 0 on the diagonal.
  double resistance(int i, int j) const {
    if (i == j) return 0.0;
    if (!connected(i, j)) return std::numeric_limits<double>::infinity();
    const Matrix& x = inverse_[component_[i]];
    const int a = local_[i], b = local_[j];
    return x(a, a) + x(b, b) - 2.0 * x(a, b);
  }

  double conductance(int i, int j) const {
    if (i == j) throw std::invalid_argument("effective conductance: i == j");
    if (!connected(i, j)) return 0.0;
    return 1.0 / resistance(i, j);
  }

  /// Node potentials when `current` enters at a and leaves at b, with the
  /// component's ground node at 0. Nodes outside the component read 0.
  Vector potentials(int a, int b, double current) const {
    if (a == b || !connected(a, b)) throw std::invalid_argument("potentials: terminals must be distinct and connected");
    Vector v = Vector::Zero(n_);
    const int comp = component_[a];
    const Matrix& x = inverse_[comp];
    const int la = local_[a], lb = local_[b];
    const auto& mem = members_[comp];
    for (std::size_t k = 0; k < mem.size(); ++k) v(mem[k]) = current * (x(k, la) - x(k, lb));
    return v;
  }

  /// Net current leaving each node for the given potentials, i.e. L v.
  Vector net_outflow(const Vector& v) const {
    Vector out = Vector::Zero(n_);
    for (int i = 0; i < n_; ++i)
      for (const auto& e : adj_[i]) out(i) += e.conductance * (v(i) - v(e.to));
    return out;
  }

 private:
  void label_components() {
    for (int s = 0; s < n_; ++s) {
      if (component_[s] >= 0) continue;
      const int id = static_cast<int>(members_.size());
      members_.emplace_back();
      std::queue<int> q;
      q.push(s);
      component_[s] = id;
      while (!q.empty()) {
        const int u = q.front();
        q.pop();
        local_[u] = static_cast<int>(members_[id].size());
        members_[id].push_back(u);
        for (const auto& e : adj_[u])
          if (component_[e.to] < 0) {
            component_[e.to] = id;
            q.push(e.to);
          }
      }
    }
  }

  void invert_component(const std::vector<int>& mem) {
    const int m = static_cast<int>(mem.size());
    Matrix x = Matrix::Zero(m, m);
    if (m > 1) {
      // Reduced Laplacian with local node 0 grounded.
      Matrix lap = Matrix::Zero(m - 1, m - 1);
      for (int k = 1; k < m; ++k)
        for (const auto& e : adj_[mem[k]]) {
          lap(k - 1, k - 1) += e.conductance;
          const int l = local_[e.to];
          if (l > 0) lap(k - 1, l - 1) -= e.conductance;
        }
      Eigen::LDLT<Matrix> ldlt(lap);
      const auto d = ldlt.vectorD();
      const double dmax = d.cwiseAbs().maxCoeff();
      if (ldlt.info() != Eigen::Success || !(d.minCoeff() > kPivotTolerance * dmax))
        throw Error("circuit solve: reduced Laplacian below pivot tolerance");
      x.bottomRightCorner(m - 1, m - 1) = ldlt.solve(Matrix::Identity(m - 1, m - 1));
    }
    inverse_.push_back(std::move(x));
  }

  int n_;
  std::vector<std::vector<Edge>> adj_;
  std::vector<int> component_;
  std::vector<int> local_;
  std::vector<std::vector<int>> members_;
  std::vector<Matrix> inverse_;
};

/// Equivalent conductance between i and j; 0 for disconnected pairs.
template <GraphLike G>
double effective_conductance(const G& g, int i, int j) {
  return CircuitModel(g).conductance(i, j);
}

/// Full matrix of equivalent conductances (zero diagonal).
inline Matrix effective_conductances(const CircuitModel& model) {
  const int n = model.n();
  Matrix out = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out(i, j) = out(j, i) = model.conductance(i, j);
  return out;
}

inline DistanceMatrix ohmic_distances(const CircuitModel& model) {
  const int n = model.n();
  DistanceMatrix out{Matrix(n, n), DistanceKind::Ohmic};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.d(i, j) = model.resistance(i, j);
  return out;
}

/// C(i) = sum_{j != i} G_ij.
template <GraphLike G>
CentralityVector ohmic_closeness(const G& g) {
  const CircuitModel model(g);
  const Matrix gm = effective_conductances(model);
  CentralityVector c{std::vector<double>(g.n()), Statistic::OhmicCloseness, units_of(g)};
  for (int i = 0; i < g.n(); ++i) c.values[i] = gm.row(i).sum();
  return c;
}

/// Currents for one terminal pair driven at unit power.
struct FlowSolution {
  int source = 0;
  int sink = 0;
  double injected_current = 0.0;  // sqrt(G_ab), so that I^2 / G = 1 W
  Vector potentials;
  struct Current {
    int from, to;
    double amps;  // positive when flowing from -> to
  };
  std::vector<Current> currents;  // one entry per undirected conductor
};

inline FlowSolution solve_flow(const CircuitModel& model, int a, int b) {
  FlowSolution f;
  f.source = a;
  f.sink = b;
  const double gab = model.conductance(a, b);
  if (!(gab > 0.0)) throw std::invalid_argument("solve_flow: terminals not connected");
  f.injected_current = std::sqrt(gab);
  f.potentials = model.potentials(a, b, f.injected_current);
  for (int i = 0; i < model.n(); ++i)
    for (const auto& e : model.neighbors(i))
      if (i < e.to) f.currents.push_back({i, e.to, e.conductance * (f.potentials(i) - f.potentials(e.to))});
  return f;
}

/// Per-node throughflow: half the absolute current on incident conductors,
/// with both terminals assigned the full injected current.
inline Vector throughflow(const FlowSolution& f, int n) {
  Vector t = Vector::Zero(n);
  for (const auto& c : f.currents) {
    t(c.from) += 0.5 * std::abs(c.amps);
    t(c.to) += 0.5 * std::abs(c.amps);
  }
  t(f.source) = f.injected_current;
  t(f.sink) = f.injected_current;
  return t;
}

/// C_P(i) = sum over ordered pairs (a,b) in a common component of
/// T_i^{ab} / sqrt(G_ab), with every pair driven at unit power.
template <GraphLike G>
CentralityVector fixed_power_betweenness(const G& g) {
  const CircuitModel model(g);
  const int n = g.n();
  Vector acc = Vector::Zero(n);
  for (const auto& mem : model.components()) {
    for (std::size_t p = 0; p < mem.size(); ++p)
      for (std::size_t q = p + 1; q < mem.size(); ++q) {
        const FlowSolution f = solve_flow(model, mem[p], mem[q]);
        // (b, a) reverses every current and leaves the throughflow unchanged.
        acc += (2.0 / f.injected_current) * throughflow(f, n);
      }
  }
  CentralityVector c{std::vector<double>(acc.data(), acc.data() + n), Statistic::FixedPowerBetweenness, "relative"};
  return c;
}

}  // namespace threshnet
