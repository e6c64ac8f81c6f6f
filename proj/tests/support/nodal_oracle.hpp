#pragma once

// Brute-force circuit analysis used as an oracle: assemble the full nodal
// system for one terminal pair, ground the sink, and solve by Gaussian
// elimination with partial pivoting. No pseudoinverse, no Eigen solvers.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace threshnet::testing {

using Dense = std::vector<std::vector<double>>;

inline std::vector<double> gauss_solve(Dense a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-300) throw std::runtime_error("gauss_solve: singular");
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

// Node potentials for `current` amps injected at a and withdrawn at b, with
// v_b = 0. `w` is a symmetric conductance matrix of a connected graph.
inline std::vector<double> nodal_potentials(const Dense& w, int a, int b, double current) {
  const int n = static_cast<int>(w.size());
  std::vector<int> idx;
  for (int i = 0; i < n; ++i)
    if (i != b) idx.push_back(i);
  const std::size_t m = idx.size();
  Dense lap(m, std::vector<double>(m, 0.0));
  std::vector<double> rhs(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const int i = idx[r];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      lap[r][r] += w[i][j];
    }
    for (std::size_t c = 0; c < m; ++c)
      if (c != r) lap[r][c] = -w[i][idx[c]];
    if (i == a) rhs[r] = current;
  }
  const auto x = gauss_solve(lap, rhs);
  std::vector<double> v(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) v[idx[r]] = x[r];
  return v;
}

inline double nodal_resistance(const Dense& w, int a, int b) { return nodal_potentials(w, a, b, 1.0)[a]; }

// Fixed-power betweenness by definition: every ordered pair driven at
// I = sqrt(G), throughflow half the absolute incident current (terminals
// take I), each pair weighted by 1/sqrt(G).
inline std::vector<double> nodal_fixed_power_betweenness(const Dense& w) {
  const int n = static_cast<int>(w.size());
  std::vector<double> c(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const double g = 1.0 / nodal_resistance(w, a, b);
      const double current = std::sqrt(g);
      const auto v = nodal_potentials(w, a, b, current);
      for (int i = 0; i < n; ++i) {
        double t = 0.0;
        if (i == a || i == b) {
          t = current;
        } else {
          for (int j = 0; j < n; ++j)
            if (j != i) t += std::abs(w[i][j] * (v[i] - v[j]));
          t *= 0.5;
        }
        c[i] += t / std::sqrt(g);
      }
    }
  return c;
}

}  // namespace threshnet::testing
