#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace threshnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Anything the metric routines can walk: node count, a nonnegative
// weight per ordered pair, and a direction flag.
template <typename G>
concept GraphLike = requires(const G& g, int i, int j) {
  { g.n() } -> std::convertible_to<int>;
  { g.weight(i, j) } -> std::convertible_to<double>;
  { g.directed() } -> std::convertible_to<bool>;
};

/// Nonnegative-weight sociomatrix with zero diagonal. Undirected graphs are
/// stored as symmetric matrices.
class ValuedGraph {
 public:
  ValuedGraph() = default;

  ValuedGraph(Matrix weights, bool directed, std::string unit_label = "units")
      : weights_(std::move(weights)), directed_(directed), unit_(std::move(unit_label)) {
    if (weights_.rows() != weights_.cols())
      throw std::invalid_argument("ValuedGraph: weight matrix must be square");
    if (weights_.rows() < 1) throw std::invalid_argument("ValuedGraph: empty node set");
    const auto n = weights_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (weights_(i, i) != 0.0) throw std::invalid_argument("ValuedGraph: nonzero diagonal");
      for (Eigen::Index j = 0; j < n; ++j) {
        const double w = weights_(i, j);
        if (!(w >= 0.0) || !std::isfinite(w))
          throw std::invalid_argument("ValuedGraph: weights must be finite and nonnegative");
        if (!directed_ && w != weights_(j, i))
          throw std::invalid_argument("ValuedGraph: undirected weights must be symmetric");
      }
    }
  }

  int n() const { return static_cast<int>(weights_.rows()); }
  double weight(int i, int j) const { return weights_(i, j); }
  const Matrix& weights() const { return weights_; }
  bool directed() const { return directed_; }
  const std::string& unit_label() const { return unit_; }

  // Undirected view with w_ij = (w_ij + w_ji) / 2; identity on undirected graphs.
  ValuedGraph symmetrized() const {
    if (!directed_) return *this;
    Matrix s = 0.5 * (weights_ + weights_.transpose());
    return ValuedGraph(std::move(s), false, unit_);
  }

  ValuedGraph scaled(double k) const {
    if (!(k > 0.0)) throw std::invalid_argument("ValuedGraph::scaled: k must be positive");
    return ValuedGraph(weights_ * k, directed_, unit_);
  }

  friend bool operator==(const ValuedGraph& a, const ValuedGraph& b) {
    return a.directed_ == b.directed_ && a.unit_ == b.unit_ && a.weights_.rows() == b.weights_.rows() &&
           a.weights_ == b.weights_;
  }

 private:
  Matrix weights_;
  bool directed_ = false;
  std::string unit_ = "units";
};

using AdjacencyMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// 0/1 image of a valued graph. `source_threshold` is empty for graphs that
/// did not come from a single cut (e.g. annealed states).
class BinaryGraph {
 public:
  BinaryGraph() = default;

  BinaryGraph(AdjacencyMatrix adjacency, bool directed, std::optional<double> source_threshold = {})
      : adj_(std::move(adjacency)), directed_(directed), threshold_(source_threshold) {
    if (adj_.rows() != adj_.cols()) throw std::invalid_argument("BinaryGraph: adjacency must be square");
    const auto n = adj_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (adj_(i, i) != 0) throw std::invalid_argument("BinaryGraph: nonzero diagonal");
      for (Eigen::Index j = 0; j < n; ++j) {
        if (adj_(i, j) > 1) throw std::invalid_argument("BinaryGraph: entries must be 0 or 1");
        if (!directed_ && adj_(i, j) != adj_(j, i))
          throw std::invalid_argument("BinaryGraph: undirected adjacency must be symmetric");
      }
    }
  }

  static BinaryGraph empty(int n, bool directed) {
    return BinaryGraph(AdjacencyMatrix::Zero(n, n), directed);
  }

  int n() const { return static_cast<int>(adj_.rows()); }
  bool has_edge(int i, int j) const { return adj_(i, j) != 0; }
  double weight(int i, int j) const { return adj_(i, j); }
  const AdjacencyMatrix& adjacency() const { return adj_; }
  bool directed() const { return directed_; }
  std::optional<double> source_threshold() const { return threshold_; }

  // Toggles (i,j), and (j,i) as well when undirected.
  void flip(int i, int j) {
    if (i == j) throw std::invalid_argument("BinaryGraph::flip: self loop");
    adj_(i, j) ^= 1;
    if (!directed_) adj_(j, i) = adj_(i, j);
    threshold_.reset();
  }

  // Ordered pairs carrying a tie; an undirected edge counts twice.
  long arc_count() const {
    long c = 0;
    for (Eigen::Index i = 0; i < adj_.size(); ++i) c += adj_.data()[i];
    return c;
  }

  // Mean number of ties per node (arcs per node when directed).
  double edges_per_node() const { return static_cast<double>(arc_count()) / n(); }

  ValuedGraph as_valued() const {
    return ValuedGraph(adj_.cast<double>(), directed_, "Phil");
  }

  friend bool operator==(const BinaryGraph& a, const BinaryGraph& b) {
    return a.directed_ == b.directed_ && a.adj_.rows() == b.adj_.rows() && a.adj_ == b.adj_;
  }

 private:
  AdjacencyMatrix adj_;
  bool directed_ = false;
  std::optional<double> threshold_;
};

static_assert(GraphLike<ValuedGraph>);

// Physical unit of a graph's statistics: the valued unit, or Phil for binary graphs.
template <GraphLike G>
std::string units_of(const G& g) {
  if constexpr (requires { g.unit_label(); }) {
    return g.unit_label();
  } else {
    return "Phil";
  }
}
static_assert(GraphLike<BinaryGraph>);

}  // namespace threshnet
