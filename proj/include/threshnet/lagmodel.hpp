#pragma once

#include "threshnet/core.hpp"
#include "threshnet/dichotomizer.hpp"
#include "threshnet/graph.hpp"
#include "threshnet/netgen.hpp"
#include "threshnet/parallel.hpp"
#include "threshnet/sweep.hpp"
#include "threshnet/table.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace threshnet {

/// One-step network lag model
///   y1_i = intercept + gamma_ar y0_i + beta sum_j w_ij y0_j + e_i,  e ~ N(0, sigma^2),
/// with y0 correlated with standardized indegree at rho.
struct LagConfig {
  double gamma_ar = 0.25;
  double beta = 0.1;
  double sigma = 1.0;
  double rho = 0.5;
  double mu_y = 1.0;
  double intercept = 0.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("LagConfig: sigma must be positive");
    if (!(std::abs(rho) <= 1.0)) throw std::invalid_argument("LagConfig: |rho| must not exceed 1");
  }
};

/// Default draws for the coefficients: gamma_ar ~ U(0.05, 0.5) and
/// beta ~ U(-0.2, 0.2) conditioned on |beta| >= 0.02.
struct LagPriors {
  double gamma_lo = 0.05, gamma_hi = 0.5;
  double beta_lo = -0.2, beta_hi = 0.2;
  double beta_dead_zone = 0.02;

  LagConfig draw(LagConfig base, Rng& rng) const {
    std::uniform_real_distribution<double> g(gamma_lo, gamma_hi), b(beta_lo, beta_hi);
    base.gamma_ar = g(rng);
    do base.beta = b(rng);
    while (std::abs(base.beta) < beta_dead_zone);
    return base;
  }
};

struct PanelData {
  Vector y0;
  Vector y1;
  Vector network_predictor;

  Eigen::Index n() const { return y0.size(); }
};

/// x_i = sum_j w_ij y0_j.
template <GraphLike G>
Vector network_predictor(const G& g, const Vector& y0) {
  Vector x = Vector::Zero(g.n());
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      if (i != j) x(i) += g.weight(i, j) * y0(j);
  return x;
}

inline PanelData simulate_outcomes(const ValuedGraph& g, const LagConfig& cfg) {
  cfg.validate();
  const int n = g.n();
  Vector indeg = g.weights().colwise().sum().transpose();
  const double mean = indeg.mean();
  const double sd = std::sqrt((indeg.array() - mean).square().mean());
  Vector s = Vector::Zero(n);
  if (sd > 1e-12 * std::max(1.0, std::abs(mean)))
    s = (indeg.array() - mean) / sd;
  else if (cfg.rho != 0.0)
    throw Error("simulate_outcomes: indegree has zero variance, correlation unrealizable");

  auto rng = derive_rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PanelData pd;
  pd.y0.resize(n);
  const double resid = std::sqrt(1.0 - cfg.rho * cfg.rho);
  for (int j = 0; j < n; ++j) pd.y0(j) = cfg.mu_y + cfg.rho * s(j) + resid * normal(rng);
  pd.network_predictor = network_predictor(g, pd.y0);
  pd.y1.resize(n);
  for (int i = 0; i < n; ++i)
    pd.y1(i) = cfg.intercept + cfg.gamma_ar * pd.y0(i) + cfg.beta * pd.network_predictor(i) + cfg.sigma * normal(rng);
  return pd;
}

/// Same outcomes, network term recomputed from another graph.
template <GraphLike G>
PanelData with_network(const PanelData& pd, const G& g) {
  return PanelData{pd.y0, pd.y1, network_predictor(g, pd.y0)};
}

/// OLS of y1 on [1, y0, network_predictor] with classical standard errors.
struct FitResult {
  Eigen::Vector3d coef = Eigen::Vector3d::Zero();
  Eigen::Vector3d se = Eigen::Vector3d::Zero();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();
  double residual_variance = 0.0;
  double r2 = 0.0;
  int df = 0;

  double intercept() const { return coef(0); }
  double gamma_hat() const { return coef(1); }
  double beta_hat() const { return coef(2); }
};

inline FitResult fit_ols(const PanelData& pd) {
  const Eigen::Index n = pd.n();
  if (n < 4) throw std::invalid_argument("fit_ols: need at least 4 observations");
  if (pd.y1.size() != n || pd.network_predictor.size() != n)
    throw std::invalid_argument("fit_ols: panel vectors differ in length");
  Eigen::MatrixXd x(n, 3);
  x.col(0).setOnes();
  x.col(1) = pd.y0;
  x.col(2) = pd.network_predictor;

  // Unit-norm columns make the rank decision scale-free.
  Eigen::Vector3d norm = x.colwise().norm().transpose();
  for (int k = 0; k < 3; ++k)
    if (!(norm(k) > 0.0)) throw CollinearDesign();
  const Eigen::MatrixXd xs = x * norm.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw CollinearDesign();

  FitResult f;
  const Eigen::Vector3d bs = qr.solve(pd.y1);
  f.coef = bs.cwiseQuotient(norm);
  const Vector resid = pd.y1 - x * f.coef;
  f.df = static_cast<int>(n - 3);
  const double rss = resid.squaredNorm();
  f.residual_variance = rss / f.df;
  const double tss = (pd.y1.array() - pd.y1.mean()).square().sum();
  f.r2 = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 1.0;

  const Eigen::Matrix3d xtx_inv = (xs.transpose() * xs).inverse();
  for (int k = 0; k < 3; ++k) {
    f.se(k) = std::sqrt(f.residual_variance * xtx_inv(k, k)) / norm(k);
    f.t(k) = f.se(k) > 0.0 ? f.coef(k) / f.se(k) : 0.0;
  }
  return f;
}

inline double t_critical(int df, double level = 0.95) {
  boost::math::students_t dist(df);
  return boost::math::quantile(dist, 0.5 + level / 2.0);
}

/// Error summary of one estimate against its true value. `mse` is the
/// single-fit estimate bias^2 + se^2.
struct EstimateCheck {
  double estimate = 0.0;
  double se = 0.0;
  double truth = 0.0;
  double mse = 0.0;
  bool covered = false;
  double t_deviation = 0.0;  // (estimate - truth) / se

  static EstimateCheck of(double estimate, double se, double truth, double tcrit) {
    EstimateCheck c{estimate, se, truth};
    const double err = estimate - truth;
    c.mse = err * err + se * se;
    c.covered = std::abs(err) <= tcrit * se;
    c.t_deviation = se > 0.0 ? err / se : 0.0;
    return c;
  }
};

struct EfficiencyRow {
  int step = 0;
  double threshold = 0.0;
  double edges_per_node = 0.0;
  std::optional<double> factor;
  std::optional<FitResult> fit;  // raw fit on the binary predictor
  std::string missing;           // reason when `fit` is empty
  EstimateCheck gamma;           // autoregressive term, unscaled
  EstimateCheck beta;            // network term, divided by the factor
  double gamma_mse_ratio = 0.0;
  double beta_mse_ratio = 0.0;

  bool ok() const { return fit.has_value(); }
};

enum class Criterion { MinGammaMse, MinBetaMse, MaxR2 };

inline std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::MinGammaMse: return "min_gamma_mse";
    case Criterion::MinBetaMse: return "min_beta_mse";
    case Criterion::MaxR2: return "max_r2";
  }
  return "";
}

inline constexpr std::array<Criterion, 3> kAllCriteria = {Criterion::MinGammaMse, Criterion::MinBetaMse,
                                                          Criterion::MaxR2};

struct EfficiencyReport {
  LagConfig truth;
  FitResult valued;
  EstimateCheck valued_gamma;
  EstimateCheck valued_beta;
  std::vector<EfficiencyRow> rows;
  std::optional<int> best_gamma_mse, best_beta_mse, best_r2;  // row indices

  std::optional<int> best(Criterion c) const {
    switch (c) {
      case Criterion::MinGammaMse: return best_gamma_mse;
      case Criterion::MinBetaMse: return best_beta_mse;
      case Criterion::MaxR2: return best_r2;
    }
    return std::nullopt;
  }
};

/// Fits the valued model once and the dichotomized model at every cut, with
/// the network coefficient and its interval rescaled by the cut's factor.
/// Cuts whose split or design is degenerate are kept as missing rows.
inline EfficiencyReport threshold_efficiency(const ValuedGraph& g, const LagConfig& cfg,
                                             const std::vector<double>& thresholds) {
  const PanelData pd = simulate_outcomes(g, cfg);
  EfficiencyReport rep;
  rep.truth = cfg;
  rep.valued = fit_ols(pd);
  const double tcrit = t_critical(rep.valued.df);
  rep.valued_gamma = EstimateCheck::of(rep.valued.gamma_hat(), rep.valued.se(1), cfg.gamma_ar, tcrit);
  rep.valued_beta = EstimateCheck::of(rep.valued.beta_hat(), rep.valued.se(2), cfg.beta, tcrit);

  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    EfficiencyRow row;
    row.step = static_cast<int>(k);
    row.threshold = thresholds[k];
    const BinaryGraph b = dichotomize(g, thresholds[k]);
    row.edges_per_node = b.edges_per_node();
    try {
      row.factor = conversion_factor(g, b).factor;
      row.fit = fit_ols(with_network(pd, b));
    } catch (const DegenerateSplit& e) {
      row.missing = e.what();
    } catch (const CollinearDesign& e) {
      row.missing = e.what();
    }
    if (row.fit) {
      const double c = *row.factor;
      row.gamma = EstimateCheck::of(row.fit->gamma_hat(), row.fit->se(1), cfg.gamma_ar, tcrit);
      row.beta = EstimateCheck::of(row.fit->beta_hat() / c, row.fit->se(2) / c, cfg.beta, tcrit);
      row.gamma_mse_ratio = row.gamma.mse / rep.valued_gamma.mse;
      row.beta_mse_ratio = row.beta.mse / rep.valued_beta.mse;
    }
    rep.rows.push_back(std::move(row));
  }

  // Ties go to the later (sparser) cut.
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const auto& r = rep.rows[k];
    if (!r.ok()) continue;
    const int idx = static_cast<int>(k);
    if (!rep.best_gamma_mse || r.gamma.mse <= rep.rows[*rep.best_gamma_mse].gamma.mse) rep.best_gamma_mse = idx;
    if (!rep.best_beta_mse || r.beta.mse <= rep.rows[*rep.best_beta_mse].beta.mse) rep.best_beta_mse = idx;
    if (!rep.best_r2 || r.fit->r2 >= rep.rows[*rep.best_r2].fit->r2) rep.best_r2 = idx;
  }
  return rep;
}

inline EfficiencyReport threshold_efficiency(const ValuedGraph& g, const LagConfig& cfg, const LadderSpec& ladder) {
  ladder.validate();
  return threshold_efficiency(g, cfg, ladder.resolve(g));
}

inline Table efficiency_table(const EfficiencyReport& rep) {
  Table t({"step", "threshold", "edges_per_node", "factor", "gamma_hat", "beta_hat_raw", "beta_hat_adjusted",
           "beta_se_adjusted", "gamma_mse", "beta_mse", "gamma_mse_ratio", "beta_mse_ratio", "cover_gamma",
           "cover_beta", "r2", "optimal_for"});
  {
    Table::Row row;
    const auto& v = rep.valued;
    row.add("valued").add("NA").add("NA").add(1.0).add(v.gamma_hat()).add(v.beta_hat()).add(v.beta_hat());
    row.add(v.se(2)).add(rep.valued_gamma.mse).add(rep.valued_beta.mse).add(1.0).add(1.0);
    row.add(rep.valued_gamma.covered).add(rep.valued_beta.covered).add(v.r2).add("");
    t.push(std::move(row));
  }
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const auto& r = rep.rows[k];
    Table::Row row;
    row.add(r.step).add(r.threshold).add(r.edges_per_node).add(r.factor);
    if (r.ok()) {
      row.add(r.fit->gamma_hat()).add(r.fit->beta_hat()).add(r.beta.estimate).add(r.beta.se);
      row.add(r.gamma.mse).add(r.beta.mse).add(r.gamma_mse_ratio).add(r.beta_mse_ratio);
      row.add(r.gamma.covered).add(r.beta.covered).add(r.fit->r2);
    } else {
      for (int c = 0; c < 11; ++c) row.add("NA");
    }
    std::string tags;
    for (auto c : kAllCriteria)
      if (rep.best(c) == static_cast<int>(k)) tags += (tags.empty() ? "" : ";") + to_string(c);
    row.add(tags);
    t.push(std::move(row));
  }
  return t;
}

/// Crossed grid of generative and lag configurations.
struct BatchConfig {
  std::vector<GenConfig> gen_grid;
  std::vector<LagConfig> lag_grid;
  int replicates = 1;
  LadderSpec ladder;
  bool draw_coefficients = true;  // redraw gamma_ar and beta per instance from `priors`
  LagPriors priors;
  std::uint64_t master_seed = 1;
  int threads = 1;

  void validate() const {
    if (gen_grid.empty() || lag_grid.empty()) throw std::invalid_argument("BatchConfig: empty grid");
    if (replicates < 1) throw std::invalid_argument("BatchConfig: replicates must be at least 1");
    for (const auto& g : gen_grid) g.validate();
    for (const auto& l : lag_grid) l.validate();
    ladder.validate();
  }
};

struct StudyRow {
  int gen_index = 0, lag_index = 0, replicate = 0;
  GenConfig gen;
  LagConfig lag;
  Criterion criterion = Criterion::MinBetaMse;
  std::optional<int> step;  // empty when every cut was missing
  double threshold = 0.0;
  double edges_per_node = 0.0;
  double density = 0.0;  // edges_per_node / (n - 1)
  double gamma_mse_ratio = 0.0;
  double beta_mse_ratio = 0.0;
  bool cover_gamma = false;
  bool cover_beta = false;
  double r2 = 0.0;
  double adjusted_beta = 0.0;
  double beta_t = 0.0;  // (adjusted beta - beta) / adjusted se
};

struct StudyResult {
  std::vector<StudyRow> rows;  // ordered by (gen, lag, replicate, criterion)
};

inline std::vector<StudyRow> study_rows(const EfficiencyReport& rep, const GenConfig& gen, int gi, int li, int r) {
  std::vector<StudyRow> out;
  for (auto c : kAllCriteria) {
    StudyRow row;
    row.gen_index = gi;
    row.lag_index = li;
    row.replicate = r;
    row.gen = gen;
    row.lag = rep.truth;
    row.criterion = c;
    if (auto b = rep.best(c)) {
      const auto& e = rep.rows[*b];
      row.step = e.step;
      row.threshold = e.threshold;
      row.edges_per_node = e.edges_per_node;
      row.density = e.edges_per_node / (gen.n - 1);
      row.gamma_mse_ratio = e.gamma_mse_ratio;
      row.beta_mse_ratio = e.beta_mse_ratio;
      row.cover_gamma = e.gamma.covered;
      row.cover_beta = e.beta.covered;
      row.r2 = e.fit->r2;
      row.adjusted_beta = e.beta.estimate;
      row.beta_t = e.beta.t_deviation;
    }
    out.push_back(row);
  }
  return out;
}

inline StudyResult batch_study(const BatchConfig& cfg) {
  cfg.validate();
  const std::size_t ng = cfg.gen_grid.size(), nl = cfg.lag_grid.size(), nr = cfg.replicates;
  std::vector<std::vector<StudyRow>> parts(ng * nl * nr);
  parallel_for(parts.size(), cfg.threads, [&](std::size_t idx) {
    const int gi = static_cast<int>(idx / (nl * nr));
    const int li = static_cast<int>((idx / nr) % nl);
    const int r = static_cast<int>(idx % nr);
    GenConfig gen = cfg.gen_grid[gi];
    gen.seed = derive_seed(cfg.master_seed, idx, 0);
    LagConfig lag = cfg.lag_grid[li];
    if (cfg.draw_coefficients) {
      auto rng = derive_rng(cfg.master_seed, idx, 2);
      lag = cfg.priors.draw(lag, rng);
    }
    lag.seed = derive_seed(cfg.master_seed, idx, 1);
    const ValuedGraph g = sample_graph(gen);
    parts[idx] = study_rows(threshold_efficiency(g, lag, cfg.ladder), gen, gi, li, r);
  });
  StudyResult out;
  for (auto& p : parts) out.rows.insert(out.rows.end(), p.begin(), p.end());
  return out;
}

inline Table study_table(const StudyResult& s) {
  Table t({"gen_index", "lag_index", "replicate", "n", "sigma_alpha", "geometry", "geo_strength", "cluster_pref",
           "mixing", "family", "gamma_ar", "beta", "sigma", "rho", "mu_y", "intercept", "criterion", "step",
           "threshold", "edges_per_node", "density", "gamma_mse_ratio", "beta_mse_ratio", "cover_gamma",
           "cover_beta", "r2", "adjusted_beta", "beta_t"});
  for (const auto& r : s.rows) {
    Table::Row row;
    row.add(r.gen_index).add(r.lag_index).add(r.replicate);
    row.add(r.gen.n).add(r.gen.sigma_alpha).add(to_string(r.gen.geometry)).add(r.gen.geo_strength);
    row.add(r.gen.cluster_pref).add(r.gen.mixing).add(to_string(r.gen.family));
    row.add(r.lag.gamma_ar).add(r.lag.beta).add(r.lag.sigma).add(r.lag.rho).add(r.lag.mu_y).add(r.lag.intercept);
    row.add(to_string(r.criterion));
    if (r.step) {
      row.add(*r.step).add(r.threshold).add(r.edges_per_node).add(r.density).add(r.gamma_mse_ratio);
      row.add(r.beta_mse_ratio).add(r.cover_gamma).add(r.cover_beta).add(r.r2).add(r.adjusted_beta).add(r.beta_t);
    } else {
      for (int c = 0; c < 11; ++c) row.add("NA");
    }
    t.push(std::move(row));
  }
  return t;
}

/// Histogram of deviation t-statistics against a reference t density
/// (50 degrees of freedom by default), plus the share inside the
/// reference's central 95% region as a final row.
inline Table t_summary_table(const std::vector<double>& tstats, int df = 50, double lo = -6.0, double hi = 6.0,
                             int bins = 24) {
  boost::math::students_t dist(df);
  Table t({"bin_lo", "bin_hi", "observed_fraction", "reference_fraction"});
  const double n = static_cast<double>(tstats.size());
  auto frac_in = [&](double a, double b) {
    std::size_t c = 0;
    for (double x : tstats)
      if (x >= a && x < b) ++c;
    return n > 0 ? c / n : 0.0;
  };
  auto ref_in = [&](double a, double b) {
    const double fa = std::isinf(a) ? 0.0 : boost::math::cdf(dist, a);
    const double fb = std::isinf(b) ? 1.0 : boost::math::cdf(dist, b);
    return fb - fa;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> edges{-inf};
  for (int k = 0; k <= bins; ++k) edges.push_back(lo + (hi - lo) * k / bins);
  edges.push_back(inf);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    Table::Row row;
    row.add(edges[k]).add(edges[k + 1]).add(frac_in(edges[k], edges[k + 1])).add(ref_in(edges[k], edges[k + 1]));
    t.push(std::move(row));
  }
  const double q = t_critical(df);
  Table::Row central;
  central.add(-q).add(q).add(frac_in(-q, q)).add(0.95);
  t.push(std::move(central));
  return t;
}

}  // namespace threshnet
