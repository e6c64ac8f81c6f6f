#pragma once

#include "threshnet/circuit.hpp"
#include "threshnet/dichotomizer.hpp"
#include "threshnet/geodesic.hpp"
#include "threshnet/graph.hpp"
#include "threshnet/graphmetrics.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace threshnet {

/// What a binary graph is compared on. Rank statistics use the rank
/// discrepancy; value statistics the mean squared per-node deviation in
/// valued units; diameters the squared deviation in valued units.
enum class SweepStatistic { HarmonicRank, OhmicRank, PowerRank, HarmonicValue, OhmicValue, GeoDiameter, OhmicDiameter };

inline constexpr std::array<SweepStatistic, 7> kAllSweepStatistics = {
    SweepStatistic::HarmonicRank,  SweepStatistic::OhmicRank,   SweepStatistic::PowerRank,
    SweepStatistic::HarmonicValue, SweepStatistic::OhmicValue, SweepStatistic::GeoDiameter,
    SweepStatistic::OhmicDiameter};

inline std::string to_string(SweepStatistic s) {
  switch (s) {
    case SweepStatistic::HarmonicRank: return "harmonic_rank";
    case SweepStatistic::OhmicRank: return "ohmic_rank";
    case SweepStatistic::PowerRank: return "power_rank";
    case SweepStatistic::HarmonicValue: return "harmonic_value";
    case SweepStatistic::OhmicValue: return "ohmic_value";
    case SweepStatistic::GeoDiameter: return "geo_diameter";
    case SweepStatistic::OhmicDiameter: return "ohmic_diameter";
  }
  return "";
}

inline SweepStatistic sweep_statistic_from_string(const std::string& s) {
  for (auto st : kAllSweepStatistics)
    if (to_string(st) == s) return st;
  throw std::invalid_argument("unknown statistic: " + s);
}

inline bool is_rank_statistic(SweepStatistic s) {
  return s == SweepStatistic::HarmonicRank || s == SweepStatistic::OhmicRank || s == SweepStatistic::PowerRank;
}

namespace detail {

struct StatisticNeeds {
  bool harmonic = false, ohmic = false, power = false, diameters = false;

  explicit StatisticNeeds(const std::vector<SweepStatistic>& stats) {
    for (auto s : stats) switch (s) {
        case SweepStatistic::HarmonicRank:
        case SweepStatistic::HarmonicValue: harmonic = true; break;
        case SweepStatistic::OhmicRank:
        case SweepStatistic::OhmicValue: ohmic = true; break;
        case SweepStatistic::PowerRank: power = true; break;
        case SweepStatistic::GeoDiameter:
        case SweepStatistic::OhmicDiameter: diameters = true; break;
      }
  }
};

// Node statistics and diameters of one graph, computed once.
struct GraphProfile {
  std::vector<double> harmonic, ohmic, power;
  Diameters diam;

  template <GraphLike G>
  GraphProfile(const G& g, const StatisticNeeds& need) {
    std::optional<DistanceMatrix> geo;
    if (need.harmonic || need.diameters) geo = geodesic_distances(g);
    if (need.harmonic) harmonic = harmonic_closeness(*geo).values;
    if (need.ohmic || need.diameters) {
      const CircuitModel model(g);
      if (need.ohmic) {
        const Matrix gm = effective_conductances(model);
        ohmic.resize(g.n());
        for (int i = 0; i < g.n(); ++i) ohmic[i] = gm.row(i).sum();
      }
      if (need.diameters) diam = diameters(*geo, model);
    }
    if (need.power) power = fixed_power_betweenness(g).values;
  }
};

inline double mean_squared_deviation(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

}  // namespace detail

/// The valued parent's statistics, computed once and compared against any
/// number of binary images. Rankings of the parent and of every image use
/// the same tie seed, so an image identical to its parent scores zero.
class ValuedReference {
 public:
  ValuedReference(const ValuedGraph& g, std::vector<SweepStatistic> stats, std::uint64_t tie_seed)
      : graph_(&g), stats_(std::move(stats)), tie_seed_(tie_seed), need_(stats_), profile_(g, need_) {
    if (stats_.empty()) throw std::invalid_argument("ValuedReference: no statistics requested");
  }

  const ValuedGraph& graph() const { return *graph_; }
  const std::vector<SweepStatistic>& statistics() const { return stats_; }
  std::uint64_t tie_seed() const { return tie_seed_; }

  /// One entry per requested statistic, in order. Empty entries mark
  /// cells where the comparison is undefined (degenerate unit change or an
  /// undefined diameter).
  std::vector<std::optional<double>> compare(const BinaryGraph& b) const {
    if (b.n() != graph_->n() || b.directed() != graph_->directed())
      throw std::invalid_argument("ValuedReference::compare: binary graph not conformal with parent");
    const detail::GraphProfile bp(b, need_);
    std::optional<UnitConversion> conv;
    try {
      conv = conversion_factor(*graph_, b);
    } catch (const DegenerateSplit&) {
    }

    std::vector<std::optional<double>> out;
    out.reserve(stats_.size());
    for (auto s : stats_) out.push_back(compare_one(s, bp, conv));
    return out;
  }

  std::optional<double> compare(const BinaryGraph& b, SweepStatistic s) const {
    for (std::size_t k = 0; k < stats_.size(); ++k)
      if (stats_[k] == s) return compare(b)[k];
    throw std::invalid_argument("ValuedReference::compare: statistic not requested");
  }

 private:
  std::optional<double> compare_one(SweepStatistic s, const detail::GraphProfile& bp,
                                    const std::optional<UnitConversion>& conv) const {
    const auto& vp = profile_;
    auto rank_gap = [&](const std::vector<double>& valued, const std::vector<double>& binary) {
      return rank_discrepancy(rank(valued, tie_seed_), rank(binary, tie_seed_));
    };
    auto scaled = [&](const std::vector<double>& binary) {
      std::vector<double> out(binary.size());
      for (std::size_t i = 0; i < binary.size(); ++i)
        out[i] = to_valued_units(binary[i], StatKind::ClosenessLike, *conv);
      return out;
    };
    auto diameter_gap = [&](const std::optional<double>& valued,
                            const std::optional<double>& binary) -> std::optional<double> {
      if (!conv || !valued || !binary) return std::nullopt;
      const double d = to_valued_units(*binary, StatKind::DistanceLike, *conv) - *valued;
      return d * d;
    };

    switch (s) {
      case SweepStatistic::HarmonicRank: return rank_gap(vp.harmonic, bp.harmonic);
      case SweepStatistic::OhmicRank: return rank_gap(vp.ohmic, bp.ohmic);
      case SweepStatistic::PowerRank: return rank_gap(vp.power, bp.power);
      case SweepStatistic::HarmonicValue:
        if (!conv) return std::nullopt;
        return detail::mean_squared_deviation(scaled(bp.harmonic), vp.harmonic);
      case SweepStatistic::OhmicValue:
        if (!conv) return std::nullopt;
        return detail::mean_squared_deviation(scaled(bp.ohmic), vp.ohmic);
      case SweepStatistic::GeoDiameter: return diameter_gap(vp.diam.geodesic_diameter, bp.diam.geodesic_diameter);
      case SweepStatistic::OhmicDiameter: return diameter_gap(vp.diam.ohmic_diameter, bp.diam.ohmic_diameter);
    }
    return std::nullopt;
  }

  const ValuedGraph* graph_;
  std::vector<SweepStatistic> stats_;
  std::uint64_t tie_seed_;
  detail::StatisticNeeds need_;
  detail::GraphProfile profile_;
};

}  // namespace threshnet
