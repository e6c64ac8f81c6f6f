// Generates one heterogeneous network, sweeps a threshold ladder over it,
// and shows what each cut preserves and costs.

#include "threshnet/threshnet.hpp"

#include <cstdio>

using namespace threshnet;

int main() {
  GenConfig gen;
  gen.n = 60;
  gen.sigma_alpha = 2.5;
  gen.geometry = Geometry::Cloud;
  gen.seed = 2024;
  const ValuedGraph g = sample_graph(gen);

  const auto ladder = LadderSpec::densities(geometric_targets(0.5, 29.5, 12));
  const auto thresholds = ladder.resolve(g);

  std::printf("%8s %8s %10s %10s\n", "tau", "epn", "factor", "giant?");
  const double giant = giant_component_threshold(g);
  for (double tau : thresholds) {
    const BinaryGraph b = dichotomize(g, tau);
    std::printf("%8.3f %8.2f %10.3f %10s\n", tau, b.edges_per_node(), conversion_factor(g, b).factor,
                tau <= giant ? "yes" : "no");
  }

  const auto sweep = sweep_valued_graph(g, ladder, {kAllSweepStatistics.begin(), kAllSweepStatistics.end()}, 7);
  std::printf("\noptimal cuts\n");
  for (auto s : sweep.statistics) {
    const auto o = optimal_threshold(sweep, s);
    std::printf("  %-15s tau %.3f  epn %.2f  discrepancy %.4g\n", to_string(s).c_str(), o.threshold,
                o.edges_per_node, o.mean_discrepancy);
  }

  LagConfig lag;
  lag.seed = 11;
  const auto rep = threshold_efficiency(g, lag, ladder);
  if (const auto k = rep.best(Criterion::MinBetaMse)) {
    const auto& row = rep.rows[*k];
    std::printf("\nlag model: valued beta %.4f (se %.4f); best cut epn %.2f gives %.4f (se %.4f), MSE x%.0f\n",
                rep.valued_beta.estimate, rep.valued_beta.se, row.edges_per_node, row.beta.estimate, row.beta.se,
                row.beta_mse_ratio);
  }

  AnnealConfig ac;
  ac.energy = SweepStatistic::HarmonicRank;
  ac.steps = 3000;
  const auto opt = optimal_threshold(sweep, SweepStatistic::HarmonicRank);
  const auto res = anneal_binary(g, dichotomize(g, opt.threshold), ac);
  std::printf("annealing from the best harmonic cut: %.4f -> %.4f (%d moves accepted)\n", res.best_trace.front(),
              res.best_energy, res.accepted);
}
