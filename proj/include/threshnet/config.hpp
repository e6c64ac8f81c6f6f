#pragma once

#include "threshnet/annealer.hpp"
#include "threshnet/lagmodel.hpp"
#include "threshnet/netgen.hpp"
#include "threshnet/sweep.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>

// JSON (de)serialization of the run configurations. Keys are the field
// names; omitted keys keep their defaults and unknown keys are rejected.

namespace threshnet {

using Json = nlohmann::ordered_json;

namespace detail {

inline void reject_unknown_keys(const Json& j, std::initializer_list<const char*> known, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected a JSON object");
  std::set<std::string> allowed(known.begin(), known.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw std::invalid_argument(std::string(what) + ": unknown key '" + it.key() + "'");
}

template <typename T>
void read_key(const Json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

}  // namespace detail

inline void to_json(Json& j, const GenConfig& c) {
  j = Json{{"n", c.n},
           {"sigma_alpha", c.sigma_alpha},
           {"geometry", to_string(c.geometry)},
           {"geo_strength", c.geo_strength},
           {"cluster_pref", c.cluster_pref},
           {"mixing", c.mixing},
           {"family", to_string(c.family)},
           {"directed", c.directed},
           {"seed", c.seed},
           {"cluster_count", c.cluster_count}};
}

inline void from_json(const Json& j, GenConfig& c) {
  detail::reject_unknown_keys(j,
                              {"n", "sigma_alpha", "geometry", "geo_strength", "cluster_pref", "mixing", "family",
                               "directed", "seed", "cluster_count"},
                              "GenConfig");
  detail::read_key(j, "n", c.n);
  detail::read_key(j, "sigma_alpha", c.sigma_alpha);
  if (j.contains("geometry")) c.geometry = geometry_from_string(j.at("geometry").get<std::string>());
  detail::read_key(j, "geo_strength", c.geo_strength);
  detail::read_key(j, "cluster_pref", c.cluster_pref);
  detail::read_key(j, "mixing", c.mixing);
  if (j.contains("family")) c.family = family_from_string(j.at("family").get<std::string>());
  detail::read_key(j, "directed", c.directed);
  detail::read_key(j, "seed", c.seed);
  detail::read_key(j, "cluster_count", c.cluster_count);
  c.validate();
}

inline void to_json(Json& j, const LagConfig& c) {
  j = Json{{"gamma_ar", c.gamma_ar}, {"beta", c.beta},   {"sigma", c.sigma},        {"rho", c.rho},
           {"mu_y", c.mu_y},         {"intercept", c.intercept}, {"seed", c.seed}};
}

inline void from_json(const Json& j, LagConfig& c) {
  detail::reject_unknown_keys(j, {"gamma_ar", "beta", "sigma", "rho", "mu_y", "intercept", "seed"}, "LagConfig");
  detail::read_key(j, "gamma_ar", c.gamma_ar);
  detail::read_key(j, "beta", c.beta);
  detail::read_key(j, "sigma", c.sigma);
  detail::read_key(j, "rho", c.rho);
  detail::read_key(j, "mu_y", c.mu_y);
  detail::read_key(j, "intercept", c.intercept);
  detail::read_key(j, "seed", c.seed);
  c.validate();
}

inline void to_json(Json& j, const LagPriors& p) {
  j = Json{{"gamma_lo", p.gamma_lo}, {"gamma_hi", p.gamma_hi}, {"beta_lo", p.beta_lo}, {"beta_hi", p.beta_hi},
           {"beta_dead_zone", p.beta_dead_zone}};
}

inline void from_json(const Json& j, LagPriors& p) {
  detail::reject_unknown_keys(j, {"gamma_lo", "gamma_hi", "beta_lo", "beta_hi", "beta_dead_zone"}, "LagPriors");
  detail::read_key(j, "gamma_lo", p.gamma_lo);
  detail::read_key(j, "gamma_hi", p.gamma_hi);
  detail::read_key(j, "beta_lo", p.beta_lo);
  detail::read_key(j, "beta_hi", p.beta_hi);
  detail::read_key(j, "beta_dead_zone", p.beta_dead_zone);
}

inline void to_json(Json& j, const LadderSpec& s) {
  j = Json::object();
  if (s.by_density())
    j["density_targets"] = s.density_targets;
  else
    j["thresholds"] = s.thresholds;
}

inline void from_json(const Json& j, LadderSpec& s) {
  detail::reject_unknown_keys(j, {"thresholds", "density_targets"}, "LadderSpec");
  if (j.contains("density_targets") && j.contains("thresholds"))
    throw std::invalid_argument("LadderSpec: give exactly one of thresholds or density_targets");
  if (j.contains("density_targets"))
    s = LadderSpec::densities(j.at("density_targets").get<std::vector<double>>());
  else if (j.contains("thresholds"))
    s = LadderSpec::fixed(j.at("thresholds").get<std::vector<double>>());
  else
    throw std::invalid_argument("LadderSpec: missing thresholds or density_targets");
}

inline Json statistics_to_json(const std::vector<SweepStatistic>& stats) {
  Json a = Json::array();
  for (auto s : stats) a.push_back(to_string(s));
  return a;
}

inline std::vector<SweepStatistic> statistics_from_json(const Json& j) {
  std::vector<SweepStatistic> out;
  for (const auto& s : j) out.push_back(sweep_statistic_from_string(s.get<std::string>()));
  return out;
}

inline void to_json(Json& j, const SweepConfig& c) {
  j = Json{{"gen", c.gen},
           {"replicates", c.replicates},
           {"ladder", c.ladder},
           {"statistics", statistics_to_json(c.statistics)},
           {"master_seed", c.master_seed}};
}

inline void from_json(const Json& j, SweepConfig& c) {
  detail::reject_unknown_keys(j, {"gen", "replicates", "ladder", "statistics", "master_seed"}, "SweepConfig");
  detail::read_key(j, "gen", c.gen);
  detail::read_key(j, "replicates", c.replicates);
  detail::read_key(j, "ladder", c.ladder);
  if (j.contains("statistics")) c.statistics = statistics_from_json(j.at("statistics"));
  detail::read_key(j, "master_seed", c.master_seed);
}

inline void to_json(Json& j, const AnnealConfig& c) {
  j = Json{{"energy", to_string(c.energy)},
           {"initial_temperature", c.initial_temperature},
           {"cooling", c.cooling},
           {"steps", c.steps},
           {"restart_interval", c.restart_interval},
           {"seed", c.seed},
           {"tie_seed", c.tie_seed}};
}

inline void from_json(const Json& j, AnnealConfig& c) {
  detail::reject_unknown_keys(
      j, {"energy", "initial_temperature", "cooling", "steps", "restart_interval", "seed", "tie_seed"}, "AnnealConfig");
  if (j.contains("energy")) c.energy = sweep_statistic_from_string(j.at("energy").get<std::string>());
  detail::read_key(j, "initial_temperature", c.initial_temperature);
  detail::read_key(j, "cooling", c.cooling);
  detail::read_key(j, "steps", c.steps);
  detail::read_key(j, "restart_interval", c.restart_interval);
  detail::read_key(j, "seed", c.seed);
  detail::read_key(j, "tie_seed", c.tie_seed);
  c.validate();
}

inline void to_json(Json& j, const BatchConfig& c) {
  j = Json{{"gen_grid", c.gen_grid},
           {"lag_grid", c.lag_grid},
           {"replicates", c.replicates},
           {"ladder", c.ladder},
           {"draw_coefficients", c.draw_coefficients},
           {"priors", c.priors},
           {"master_seed", c.master_seed}};
}

inline void from_json(const Json& j, BatchConfig& c) {
  detail::reject_unknown_keys(
      j, {"gen_grid", "lag_grid", "replicates", "ladder", "draw_coefficients", "priors", "master_seed"}, "BatchConfig");
  detail::read_key(j, "gen_grid", c.gen_grid);
  detail::read_key(j, "lag_grid", c.lag_grid);
  detail::read_key(j, "replicates", c.replicates);
  detail::read_key(j, "ladder", c.ladder);
  detail::read_key(j, "draw_coefficients", c.draw_coefficients);
  detail::read_key(j, "priors", c.priors);
  detail::read_key(j, "master_seed", c.master_seed);
}

inline Json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace threshnet
