#pragma once

#include "threshnet/core.hpp"
#include "threshnet/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace threshnet {

enum class Geometry { None, Ring, Cloud, ClusterIn, ClusterOut };
enum class Family { Gamma, Poisson };

inline std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::None: return "None";
    case Geometry::Ring: return "Ring";
    case Geometry::Cloud: return "Cloud";
    case Geometry::ClusterIn: return "ClusterIn";
    case Geometry::ClusterOut: return "ClusterOut";
  }
  return "None";
}

inline Geometry geometry_from_string(const std::string& s) {
  for (auto g : {Geometry::None, Geometry::Ring, Geometry::Cloud, Geometry::ClusterIn, Geometry::ClusterOut})
    if (to_string(g) == s) return g;
  throw std::invalid_argument("unknown geometry: " + s);
}

inline std::string to_string(Family f) { return f == Family::Gamma ? "Gamma" : "Poisson"; }

inline Family family_from_string(const std::string& s) {
  if (s == "Gamma") return Family::Gamma;
  if (s == "Poisson") return Family::Poisson;
  throw std::invalid_argument("unknown family: " + s);
}

/// Parameters of the generative family.
///
/// Only one latent structure is active at a time, selected by `geometry`:
/// Ring and Cloud use `geo_strength` as the distance coefficient, ClusterIn
/// and ClusterOut use `cluster_pref` with its sign forced positive
/// (within-preferring) or negative (across-preferring) respectively.
struct GenConfig {
  int n = 50;
  double sigma_alpha = 1.0;
  Geometry geometry = Geometry::None;
  double geo_strength = 0.25;
  double cluster_pref = 0.25;
  double mixing = 0.0;
  Family family = Family::Gamma;
  bool directed = false;
  std::uint64_t seed = 1;
  // Extension knob; the generative model uses three clusters.
  int cluster_count = 3;

  void validate() const {
    if (n < 2) throw std::invalid_argument("GenConfig: n must be at least 2");
    if (!(sigma_alpha >= 0.0)) throw std::invalid_argument("GenConfig: sigma_alpha must be nonnegative");
    if (!std::isfinite(geo_strength) || !std::isfinite(cluster_pref) || !std::isfinite(mixing))
      throw std::invalid_argument("GenConfig: coefficients must be finite");
    if (cluster_count < 1) throw std::invalid_argument("GenConfig: cluster_count must be positive");
  }

  double effective_cluster_pref() const {
    switch (geometry) {
      case Geometry::ClusterIn: return std::abs(cluster_pref);
      case Geometry::ClusterOut: return -std::abs(cluster_pref);
      default: return 0.0;
    }
  }

  bool uses_positions() const { return geometry == Geometry::Ring || geometry == Geometry::Cloud; }
  bool uses_clusters() const { return geometry == Geometry::ClusterIn || geometry == Geometry::ClusterOut; }
};

/// Per-node latent draws. Positions are zero and cluster labels 0 when the
/// corresponding structure is inactive; active labels are 1..cluster_count.
struct NodeLatents {
  std::vector<double> alpha;
  std::vector<std::array<double, 2>> position;
  std::vector<int> cluster;
};

inline NodeLatents sample_latents(const GenConfig& config, Rng& rng) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.n);
  NodeLatents lat;
  lat.alpha.resize(n, 0.0);
  lat.position.assign(n, {0.0, 0.0});
  lat.cluster.assign(n, 0);

  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& a : lat.alpha) a = config.sigma_alpha * normal(rng);

  switch (config.geometry) {
    case Geometry::Ring:
      for (std::size_t i = 0; i < n; ++i) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        lat.position[i] = {std::cos(theta), std::sin(theta)};
      }
      break;
    case Geometry::Cloud:
      for (auto& p : lat.position) {
        p[0] = normal(rng);
        p[1] = normal(rng);
      }
      break;
    case Geometry::ClusterIn:
    case Geometry::ClusterOut: {
      std::uniform_int_distribution<int> pick(1, config.cluster_count);
      for (auto& c : lat.cluster) c = pick(rng);
      break;
    }
    case Geometry::None: break;
  }
  return lat;
}

/// mu_ij = a_i + a_j + chi a_i a_j - geo |d_i - d_j| + lambda 1(c_i = c_j).
inline double mean_parameter(const NodeLatents& lat, const GenConfig& config, int i, int j) {
  if (i == j) throw std::invalid_argument("mean_parameter: i == j");
  const double ai = lat.alpha.at(i), aj = lat.alpha.at(j);
  double mu = ai + aj + config.mixing * ai * aj;
  if (config.uses_positions()) {
    const auto& p = lat.position.at(i);
    const auto& q = lat.position.at(j);
    mu -= config.geo_strength * std::hypot(p[0] - q[0], p[1] - q[1]);
  }
  if (config.uses_clusters() && lat.cluster.at(i) == lat.cluster.at(j)) mu += config.effective_cluster_pref();
  return mu;
}

// exp(mu - 1) below 1, identity above; continuous and strictly positive
// (clamped at the smallest subnormal where exp underflows).
inline double positive_transform(double mu) {
  if (mu >= 1.0) return mu;
  return std::max(std::exp(mu - 1.0), std::numeric_limits<double>::denorm_min());
}

// One draw with mean `mean`. Gamma uses shape mean^2 and rate mean, so the
// variance is 1 regardless of the mean.
inline double draw_weight(Family family, double mean, Rng& rng) {
  // Means this small produce a zero draw to double precision anyway.
  if (mean < 1e-150) return 0.0;
  if (family == Family::Gamma) {
    std::gamma_distribution<double> gamma(mean * mean, 1.0 / mean);
    return gamma(rng);
  }
  std::poisson_distribution<long long> poisson(mean);
  return static_cast<double>(poisson(rng));
}

inline ValuedGraph sample_graph(const GenConfig& config, const NodeLatents& lat, Rng& rng) {
  const int n = config.n;
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = config.directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      const double mean = positive_transform(mean_parameter(lat, config, i, j));
      const double y = draw_weight(config.family, mean, rng);
      w(i, j) = y;
      if (!config.directed) w(j, i) = y;
    }
  }
  return ValuedGraph(std::move(w), config.directed, config.family == Family::Poisson ? "counts" : "units");
}

struct GeneratedGraph {
  NodeLatents latents;
  ValuedGraph graph;
};

inline GeneratedGraph sample_graph_with_latents(const GenConfig& config) {
  auto rng = derive_rng(config.seed);
  auto lat = sample_latents(config, rng);
  auto g = sample_graph(config, lat, rng);
  return {std::move(lat), std::move(g)};
}

inline ValuedGraph sample_graph(const GenConfig& config) { return sample_graph_with_latents(config).graph; }

}  // namespace threshnet
