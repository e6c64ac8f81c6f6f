// threshnet: command-line driver for the thresholding experiments.
//
//   threshnet [--seed S] [--config FILE] [--out DIR] [--threads T] <subcommand> ...
//
// Every run writes its tables plus manifest.json into --out. The manifest
// records the tool version, subcommand, seed and fully resolved config;
// rerunning with the same manifest inputs reproduces every table byte for
// byte.

#include "threshnet/threshnet.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace threshnet;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out = ".";
  int threads = 1;
};

// ------------------------------------------------------------- run output

class Run {
 public:
  Run(const Globals& g, std::string subcommand) : dir_(g.out) {
    fs::create_directories(dir_);
    manifest_["tool"] = "threshnet";
    manifest_["version"] = kVersion;
    manifest_["subcommand"] = std::move(subcommand);
  }

  void seed(std::uint64_t s) { manifest_["seed"] = s; }
  void config(const Json& c) { manifest_["config"] = c; }
  void input(const std::string& path) { inputs_.push_back(path); }

  void table(const std::string& name, const Table& t) {
    t.save((dir_ / name).string());
    outputs_.push_back(name);
  }

  void graph(const std::string& name, const ValuedGraph& g) {
    save_edgelist(g, (dir_ / name).string());
    outputs_.push_back(name);
  }

  void finish() {
    manifest_["inputs"] = inputs_;
    manifest_["outputs"] = outputs_;
    std::ofstream f(dir_ / "manifest.json", std::ios::binary);
    f << manifest_.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  Json manifest_;
  std::vector<std::string> inputs_, outputs_;
};

Json config_file(const Globals& g) { return g.config.empty() ? Json::object() : load_json(g.config); }

// ------------------------------------------------------ shared option sets

struct GenFlags {
  std::optional<int> n;
  std::optional<double> sigma_alpha, geo_strength, cluster_pref, mixing;
  std::optional<std::string> geometry, family;
  CLI::Option* directed = nullptr;
  CLI::Option* undirected = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--n", n, "Number of nodes");
    app->add_option("--sigma-alpha", sigma_alpha, "Standard deviation of node effects");
    app->add_option("--geometry", geometry, "None, Ring, Cloud, ClusterIn or ClusterOut");
    app->add_option("--geo-strength", geo_strength, "Distance penalty");
    app->add_option("--cluster-pref", cluster_pref, "Same-cluster shift");
    app->add_option("--mixing", mixing, "Assortative interaction of node effects");
    app->add_option("--family", family, "Gamma or Poisson");
    directed = app->add_flag("--directed", "Draw each ordered pair");
    undirected = app->add_flag("--undirected", "Draw each unordered pair once");
  }

  void apply(GenConfig& c) const {
    if (n) c.n = *n;
    if (sigma_alpha) c.sigma_alpha = *sigma_alpha;
    if (geometry) c.geometry = geometry_from_string(*geometry);
    if (geo_strength) c.geo_strength = *geo_strength;
    if (cluster_pref) c.cluster_pref = *cluster_pref;
    if (mixing) c.mixing = *mixing;
    if (family) c.family = family_from_string(*family);
    if (directed->count()) c.directed = true;
    if (undirected->count()) c.directed = false;
    c.validate();
  }
};

struct LadderFlags {
  std::vector<double> thresholds, densities, geometric;

  void attach(CLI::App* app) {
    auto* t = app->add_option("--thresholds", thresholds, "Fixed cut values")->delimiter(',')->allow_extra_args(false);
    auto* d = app->add_option("--densities", densities, "Edges-per-node targets")->delimiter(',')->allow_extra_args(false);
    auto* g = app->add_option("--geometric", geometric, "lo,hi,count geometric edges-per-node targets")
                  ->delimiter(',')
                  ->allow_extra_args(false);
    t->excludes(d)->excludes(g);
    d->excludes(g);
  }

  std::optional<LadderSpec> spec() const {
    if (!thresholds.empty()) return LadderSpec::fixed(thresholds);
    if (!densities.empty()) return LadderSpec::densities(densities);
    if (!geometric.empty()) {
      if (geometric.size() != 3) throw std::invalid_argument("--geometric: expected lo,hi,count");
      const double count = geometric[2];
      if (count < 1 || count != static_cast<int>(count))
        throw std::invalid_argument("--geometric: count must be a positive integer");
      return LadderSpec::densities(geometric_targets(geometric[0], geometric[1], static_cast<int>(count)));
    }
    return std::nullopt;
  }
};

// Default ladder: 20 geometric edges-per-node targets from 0.5 to (n-1)/2.
LadderSpec default_ladder(int n) { return LadderSpec::densities(geometric_targets(0.5, std::max(0.5, (n - 1) / 2.0), 20)); }

std::vector<SweepStatistic> parse_statistics(const std::vector<std::string>& names) {
  std::vector<SweepStatistic> out;
  for (const auto& s : names) out.push_back(sweep_statistic_from_string(s));
  return out;
}

// Input graphs for analyze/layers/anneal/lm-sweep.
struct InputFlags {
  std::string format = "edgelist";
  bool absolute = false;
  bool mutual = false;

  void attach(CLI::App* app) {
    app->add_option("--format", format, "edgelist, correlation or rank")
        ->check(CLI::IsMember({"edgelist", "correlation", "rank"}));
    app->add_flag("--absolute", absolute, "Use absolute correlations");
    app->add_flag("--mutual", mutual, "Replace w_ij by min(w_ij, w_ji) before cutting");
  }

  void merge(const Json& j) {
    if (j.contains("format")) format = j.at("format").get<std::string>();
    if (j.contains("absolute")) absolute = j.at("absolute").get<bool>();
    if (j.contains("mutual")) mutual = j.at("mutual").get<bool>();
  }

  Json to_json() const { return Json{{"format", format}, {"absolute", absolute}, {"mutual", mutual}}; }

  ValuedGraph load(const std::string& path) const {
    ValuedGraph g = format == "correlation" ? load_correlation_matrix(path, absolute)
                    : format == "rank"      ? load_rank_matrix(path)
                                            : load_edgelist(path);
    return mutual ? mutual_graph(g) : g;
  }
};

std::string dataset_name(const std::string& path) { return fs::path(path).stem().string(); }

void with_dataset(const std::string& name, const Table& t, Table* into) {
  for (std::size_t r = 0; r < t.rows(); ++r) {
    Table::Row row;
    row.add(name);
    for (const auto& c : t.row(r)) row.add(c);
    into->push(std::move(row));
  }
}

std::vector<std::string> prefixed(const std::string& first, const std::vector<std::string>& rest) {
  std::vector<std::string> h{first};
  h.insert(h.end(), rest.begin(), rest.end());
  return h;
}

void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const char* what) {
  detail::reject_unknown_keys(j, keys, what);
}

// ------------------------------------------------------------- subcommands

int cmd_generate(const Globals& g, const GenFlags& flags) {
  GenConfig cfg = config_file(g).get<GenConfig>();
  flags.apply(cfg);
  if (g.seed) cfg.seed = *g.seed;
  Run run(g, "generate");
  run.seed(cfg.seed);
  run.config(cfg);
  run.graph("graph.csv", sample_graph(cfg));
  run.finish();
  return 0;
}

int cmd_sweep(const Globals& g, const GenFlags& gen, const LadderFlags& ladder, std::optional<int> replicates,
              const std::vector<std::string>& stats) {
  SweepConfig cfg = config_file(g).get<SweepConfig>();
  gen.apply(cfg.gen);
  if (auto s = ladder.spec()) cfg.ladder = *s;
  if (cfg.ladder.steps() == 0) cfg.ladder = default_ladder(cfg.gen.n);
  if (replicates) cfg.replicates = *replicates;
  if (!stats.empty()) cfg.statistics = parse_statistics(stats);
  if (g.seed) cfg.master_seed = *g.seed;
  cfg.threads = g.threads;
  const auto r = run_sweep(cfg);
  Run run(g, "sweep");
  run.seed(cfg.master_seed);
  run.config(cfg);
  run.table("results.csv", results_table(r));
  run.table("optima.csv", optima_table(r));
  run.table("conversions.csv", conversions_table(r));
  run.finish();
  return 0;
}

struct LagFlags {
  std::optional<double> gamma_ar, beta, sigma, rho, mu_y, intercept;

  void attach(CLI::App* app) {
    app->add_option("--gamma-ar", gamma_ar, "Autoregressive coefficient");
    app->add_option("--beta", beta, "Network coefficient");
    app->add_option("--sigma", sigma, "Error standard deviation");
    app->add_option("--rho", rho, "Indegree / baseline correlation");
    app->add_option("--mu-y", mu_y, "Baseline mean");
    app->add_option("--intercept", intercept, "Model intercept");
  }

  void apply(LagConfig& c) const {
    if (gamma_ar) c.gamma_ar = *gamma_ar;
    if (beta) c.beta = *beta;
    if (sigma) c.sigma = *sigma;
    if (rho) c.rho = *rho;
    if (mu_y) c.mu_y = *mu_y;
    if (intercept) c.intercept = *intercept;
    c.validate();
  }
};

int cmd_lm_sweep(const Globals& g, const GenFlags& gen, const LagFlags& lagf, const LadderFlags& ladder,
                 const InputFlags& inflags, const std::string& input) {
  const Json file = config_file(g);
  reject_unknown(file, {"gen", "lag", "ladder", "format", "absolute", "mutual"}, "lm-sweep config");
  GenConfig gc = file.value("gen", Json::object()).get<GenConfig>();
  LagConfig lc = file.value("lag", Json::object()).get<LagConfig>();
  InputFlags in = inflags;
  in.merge(file);
  gen.apply(gc);
  lagf.apply(lc);
  LadderSpec spec;
  if (file.contains("ladder")) spec = file.at("ladder").get<LadderSpec>();
  if (auto s = ladder.spec()) spec = *s;
  if (g.seed) {
    gc.seed = derive_seed(*g.seed, 0, 0);
    lc.seed = derive_seed(*g.seed, 0, 1);
  }

  Run run(g, "lm-sweep");
  const ValuedGraph graph = input.empty() ? sample_graph(gc) : in.load(input);
  if (!input.empty()) run.input(input);
  if (spec.steps() == 0) spec = default_ladder(graph.n());
  Json resolved{{"lag", lc}, {"ladder", spec}};
  if (input.empty())
    resolved["gen"] = gc;
  else
    for (const Json flags = in.to_json(); auto& [k, v] : flags.items()) resolved[k] = v;
  run.seed(g.seed.value_or(gc.seed));
  run.config(resolved);
  run.table("efficiency.csv", efficiency_table(threshold_efficiency(graph, lc, spec)));
  run.finish();
  return 0;
}

int cmd_batch(const Globals& g, const LadderFlags& ladder, std::optional<int> replicates, bool fixed_coefficients) {
  BatchConfig cfg = config_file(g).get<BatchConfig>();
  if (cfg.gen_grid.empty()) cfg.gen_grid = {GenConfig{}};
  if (cfg.lag_grid.empty()) cfg.lag_grid = {LagConfig{}};
  if (auto s = ladder.spec()) cfg.ladder = *s;
  if (cfg.ladder.steps() == 0) {
    int n = cfg.gen_grid.front().n;
    for (const auto& gc : cfg.gen_grid) n = std::min(n, gc.n);
    cfg.ladder = default_ladder(n);
  }
  if (replicates) cfg.replicates = *replicates;
  if (fixed_coefficients) cfg.draw_coefficients = false;
  if (g.seed) cfg.master_seed = *g.seed;
  cfg.threads = g.threads;
  const auto study = batch_study(cfg);
  std::vector<double> tstats;
  for (const auto& r : study.rows)
    if (r.criterion == Criterion::MinBetaMse && r.step) tstats.push_back(r.beta_t);
  Run run(g, "batch");
  run.seed(cfg.master_seed);
  run.config(cfg);
  run.table("study.csv", study_table(study));
  run.table("t_summary.csv", t_summary_table(tstats));
  run.finish();
  return 0;
}

struct AnnealFlags {
  std::optional<std::string> energy;
  std::optional<int> steps, restart;
  std::optional<double> temperature, cooling;

  void attach(CLI::App* app) {
    app->add_option("--energy", energy, "Sweep statistic used as the energy");
    app->add_option("--steps", steps, "Number of proposals");
    app->add_option("--temperature", temperature, "Initial temperature");
    app->add_option("--cooling", cooling, "Geometric cooling factor in (0, 1)");
    app->add_option("--restart", restart, "Return to the best state every this many steps (0 = never)");
  }

  void apply(AnnealConfig& c) const {
    if (energy) c.energy = sweep_statistic_from_string(*energy);
    if (steps) c.steps = *steps;
    if (temperature) c.initial_temperature = *temperature;
    if (cooling) c.cooling = *cooling;
    if (restart) c.restart_interval = *restart;
    c.validate();
  }
};

int cmd_anneal(const Globals& g, const GenFlags& gen, const AnnealFlags& af, const LadderFlags& ladder,
               const InputFlags& inflags, const std::string& input) {
  const Json file = config_file(g);
  reject_unknown(file, {"gen", "anneal", "ladder", "format", "absolute", "mutual"}, "anneal config");
  GenConfig gc = file.value("gen", Json::object()).get<GenConfig>();
  AnnealConfig ac = file.value("anneal", Json::object()).get<AnnealConfig>();
  InputFlags in = inflags;
  in.merge(file);
  gen.apply(gc);
  af.apply(ac);
  LadderSpec spec;
  if (file.contains("ladder")) spec = file.at("ladder").get<LadderSpec>();
  if (auto s = ladder.spec()) spec = *s;
  if (g.seed) {
    gc.seed = derive_seed(*g.seed, 0, 0);
    ac.seed = derive_seed(*g.seed, 0, 1);
    ac.tie_seed = derive_seed(*g.seed, 0, 2);
  }

  Run run(g, "anneal");
  const ValuedGraph graph = input.empty() ? sample_graph(gc) : in.load(input);
  if (!input.empty()) run.input(input);
  if (spec.steps() == 0) spec = default_ladder(graph.n());

  // Start from the best ladder cut for the same energy.
  const DiscrepancyEnergy energy(graph, ac.energy, ac.tie_seed);
  std::optional<BinaryGraph> init;
  double ladder_best = std::numeric_limits<double>::infinity(), ladder_tau = 0.0;
  for (double tau : spec.resolve(graph)) {
    const BinaryGraph b = dichotomize(graph, tau);
    const double e = energy(b);
    if (!init || e <= ladder_best) {
      init = b;
      ladder_best = e;
      ladder_tau = tau;
    }
  }
  const auto result = anneal_binary(graph, *init, ac, energy);

  Json resolved{{"anneal", ac}, {"ladder", spec}};
  if (input.empty())
    resolved["gen"] = gc;
  else
    for (const Json flags = in.to_json(); auto& [k, v] : flags.items()) resolved[k] = v;
  run.seed(g.seed.value_or(ac.seed));
  run.config(resolved);
  run.table("trace.csv", anneal_trace_table(result));
  run.graph("best_graph.csv", result.best.as_valued());
  Table summary({"energy", "candidate_pairs", "ladder_threshold", "ladder_energy", "anneal_energy", "accepted",
                 "edges_per_node"});
  Table::Row row;
  row.add(to_string(ac.energy)).add(candidate_pairs(graph).size()).add(ladder_tau).add(ladder_best);
  row.add(result.best_energy).add(result.accepted).add(result.best.edges_per_node());
  summary.push(std::move(row));
  run.table("summary.csv", summary);
  run.finish();
  return 0;
}

int cmd_analyze(const Globals& g, const std::vector<std::string>& inputs, const InputFlags& inflags,
                const LadderFlags& ladder, const std::vector<std::string>& stats) {
  const Json file = config_file(g);
  reject_unknown(file, {"ladder", "statistics", "format", "absolute", "mutual"}, "analyze config");
  InputFlags in = inflags;
  in.merge(file);
  std::vector<SweepStatistic> statistics(kAllSweepStatistics.begin(), kAllSweepStatistics.end());
  if (file.contains("statistics")) statistics = statistics_from_json(file.at("statistics"));
  if (!stats.empty()) statistics = parse_statistics(stats);
  LadderSpec spec;
  if (file.contains("ladder")) spec = file.at("ladder").get<LadderSpec>();
  if (auto s = ladder.spec()) spec = *s;
  const std::uint64_t seed = g.seed.value_or(1);

  std::vector<ValuedGraph> graphs;
  for (const auto& p : inputs) graphs.push_back(in.load(p));
  if (spec.steps() == 0) {
    int n = graphs.front().n();
    for (const auto& gr : graphs) n = std::min(n, gr.n());
    spec = default_ladder(n);
  }

  std::vector<SweepResult> results(graphs.size());
  parallel_for(graphs.size(), g.threads, [&](std::size_t k) {
    results[k] = sweep_valued_graph(graphs[k], spec, statistics, derive_seed(seed, k));
  });

  Run run(g, "analyze");
  for (const auto& p : inputs) run.input(p);
  run.seed(seed);
  Json resolved = in.to_json();
  resolved["ladder"] = spec;
  resolved["statistics"] = statistics_to_json(statistics);
  run.config(resolved);

  Table all(prefixed("dataset", results_table(results[0]).header()));
  Table optima(prefixed("dataset", optima_table(results[0]).header()));
  Table conv(prefixed("dataset", conversions_table(results[0]).header()));
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto name = dataset_name(inputs[k]);
    with_dataset(name, results_table(results[k]), &all);
    with_dataset(name, optima_table(results[k]), &optima);
    with_dataset(name, conversions_table(results[k]), &conv);
  }
  run.table("results.csv", all);
  run.table("optima.csv", optima);
  run.table("conversions.csv", conv);
  run.finish();
  return 0;
}

int cmd_layers(const Globals& g, const std::string& input, const InputFlags& inflags, const LadderFlags& ladder) {
  const Json file = config_file(g);
  reject_unknown(file, {"ladder", "format", "absolute", "mutual"}, "layers config");
  InputFlags in = inflags;
  in.merge(file);
  LadderSpec spec;
  if (file.contains("ladder")) spec = file.at("ladder").get<LadderSpec>();
  if (auto s = ladder.spec()) spec = *s;
  const ValuedGraph graph = in.load(input);
  if (spec.steps() == 0) spec = default_ladder(graph.n());
  const ThresholdLadder rungs =
      spec.by_density() ? ladder_for_densities(graph, spec.density_targets) : ThresholdLadder(spec.thresholds);

  Run run(g, "layers");
  run.input(input);
  if (g.seed) run.seed(*g.seed);
  Json resolved = in.to_json();
  resolved["ladder"] = spec;
  run.config(resolved);
  run.table("layers.csv", layers_table(export_layers(graph, rungs)));
  run.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold sweeps, unit conversion and annealed dichotomization of valued networks"};
  app.failure_message(CLI::FailureMessage::help);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->expected(1);
  app.add_option("--config", g.config, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

  // generate
  GenFlags gen_generate;
  auto* generate = app.add_subcommand("generate", "Sample one valued graph");
  gen_generate.attach(generate);

  // sweep
  GenFlags gen_sweep;
  LadderFlags ladder_sweep;
  std::optional<int> sweep_reps;
  std::vector<std::string> sweep_stats;
  auto* sweep = app.add_subcommand("sweep", "Geometry experiment over replicates and a threshold ladder");
  gen_sweep.attach(sweep);
  ladder_sweep.attach(sweep);
  sweep->add_option("--replicates", sweep_reps, "Number of replicate graphs");
  sweep->add_option("--stats", sweep_stats, "Statistics to compare")->delimiter(',')->allow_extra_args(false);

  // lm-sweep
  GenFlags gen_lm;
  LagFlags lag_lm;
  LadderFlags ladder_lm;
  InputFlags in_lm;
  std::string lm_input;
  auto* lm = app.add_subcommand("lm-sweep", "Lag-model efficiency across a threshold ladder");
  gen_lm.attach(lm);
  lag_lm.attach(lm);
  ladder_lm.attach(lm);
  in_lm.attach(lm);
  lm->add_option("--input", lm_input, "Use this graph instead of sampling one")->check(CLI::ExistingFile);

  // batch
  LadderFlags ladder_batch;
  std::optional<int> batch_reps;
  bool batch_fixed = false;
  auto* batch = app.add_subcommand("batch", "Crossed generative x lag-model study");
  ladder_batch.attach(batch);
  batch->add_option("--replicates", batch_reps, "Replicates per grid cell");
  batch->add_flag("--fixed-coefficients", batch_fixed, "Use lag_grid coefficients as given");

  // anneal
  GenFlags gen_anneal;
  AnnealFlags anneal_flags;
  LadderFlags ladder_anneal;
  InputFlags in_anneal;
  std::string anneal_input;
  auto* anneal = app.add_subcommand("anneal", "Metropolis search for a low-discrepancy binary graph");
  gen_anneal.attach(anneal);
  anneal_flags.attach(anneal);
  ladder_anneal.attach(anneal);
  in_anneal.attach(anneal);
  anneal->add_option("--input", anneal_input, "Use this graph instead of sampling one")->check(CLI::ExistingFile);

  // analyze
  std::vector<std::string> analyze_inputs;
  InputFlags in_analyze;
  LadderFlags ladder_analyze;
  std::vector<std::string> analyze_stats;
  auto* analyze = app.add_subcommand("analyze", "Threshold sweep of real valued networks");
  analyze->add_option("inputs", analyze_inputs, "Input files")->required()->check(CLI::ExistingFile);
  in_analyze.attach(analyze);
  ladder_analyze.attach(analyze);
  analyze->add_option("--stats", analyze_stats, "Statistics to compare")->delimiter(',')->allow_extra_args(false);

  // layers
  std::string layers_input;
  InputFlags in_layers;
  LadderFlags ladder_layers;
  auto* layers = app.add_subcommand("layers", "Per-threshold edge membership");
  layers->add_option("input", layers_input, "Input file")->required()->check(CLI::ExistingFile);
  in_layers.attach(layers);
  ladder_layers.attach(layers);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return cmd_generate(g, gen_generate);
    if (*sweep) return cmd_sweep(g, gen_sweep, ladder_sweep, sweep_reps, sweep_stats);
    if (*lm) return cmd_lm_sweep(g, gen_lm, lag_lm, ladder_lm, in_lm, lm_input);
    if (*batch) return cmd_batch(g, ladder_batch, batch_reps, batch_fixed);
    if (*anneal) return cmd_anneal(g, gen_anneal, anneal_flags, ladder_anneal, in_anneal, anneal_input);
    if (*analyze) return cmd_analyze(g, analyze_inputs, in_analyze, ladder_analyze, analyze_stats);
    if (*layers) return cmd_layers(g, layers_input, in_layers, ladder_layers);
  } catch (const std::exception& e) {
    std::cerr << "threshnet: error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
