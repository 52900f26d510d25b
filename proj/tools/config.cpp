#include "config.hpp"

#include <fstream>

#include "mllab/errors.hpp"

namespace mllab::cli {

using nlohmann::json;

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  if (j.contains("technology")) {
    const json& t = j.at("technology");
    get_if(t, "effort_exponent", c.technology.effort_exponent);
    get_if(t, "cost_exponent", c.technology.cost_exponent);
    get_if(t, "cost_scale", c.technology.cost_scale);
    get_if(t, "noise_sigma", c.technology.noise_sigma);
    get_if(t, "max_effort", c.technology.max_effort);
  }
  if (j.contains("experiment")) {
    const json& e = j.at("experiment");
    get_if(e, "rounds", c.experiment.rounds);
    get_if(e, "questions_per_round", c.experiment.questions_per_round);
    get_if(e, "marker_phi", c.experiment.marker_phi);
    get_if(e, "piece_rate_round", c.experiment.piece_rate_round);
    get_if(e, "piece_rate_final", c.experiment.piece_rate_final);
    get_if(e, "bdm_price_cap", c.experiment.bdm_price_cap);
    get_if(e, "confidence_bonus", c.experiment.confidence_bonus);
    get_if(e, "participation_fee", c.experiment.participation_fee);
  }
  if (j.contains("population")) {
    const json& p = j.at("population");
    get_if(p, "n_subjects", c.population.n_subjects);
    get_if(p, "ability_mean", c.population.ability_mean);
    get_if(p, "ability_sd", c.population.ability_sd);
    get_if(p, "ability_min", c.population.ability_min);
    get_if(p, "ability_max", c.population.ability_max);
    get_if(p, "overconfidence_mean", c.population.overconfidence_mean);
    get_if(p, "overconfidence_sd", c.population.overconfidence_sd);
    get_if(p, "believed_ability_min", c.population.believed_ability_min);
    get_if(p, "prior_mean_low", c.population.prior_mean_low);
    get_if(p, "prior_mean_high", c.population.prior_mean_high);
    get_if(p, "prior_sd", c.population.prior_sd);
    get_if(p, "bid_noise_sd", c.population.bid_noise_sd);
    get_if(p, "male_share", c.population.male_share);
    get_if(p, "white_share", c.population.white_share);
  }
  if (j.contains("simulation")) {
    const json& s = j.at("simulation");
    get_if(s, "n_agents", c.simulation.n_agents);
    get_if(s, "rounds", c.simulation.rounds);
    get_if(s, "phi_true", c.simulation.phi_true);
    get_if(s, "mode", c.simulation.mode);
    get_if(s, "ability_low", c.simulation.ability_low);
    get_if(s, "ability_high", c.simulation.ability_high);
    get_if(s, "offset_low", c.simulation.offset_low);
    get_if(s, "offset_high", c.simulation.offset_high);
    get_if(s, "prior", c.simulation.prior);
    get_if(s, "prior_mean_low", c.simulation.prior_mean_low);
    get_if(s, "prior_mean_high", c.simulation.prior_mean_high);
    get_if(s, "prior_sd", c.simulation.prior_sd);
  }
  if (j.contains("equilibrium")) {
    const json& e = j.at("equilibrium");
    get_if(e, "phi_true", c.equilibrium.phi_true);
    get_if(e, "true_ability", c.equilibrium.true_ability);
    get_if(e, "believed_ability", c.equilibrium.believed_ability);
  }

  if (c.simulation.mode != "stochastic" && c.simulation.mode != "deterministic")
    throw ConfigError("simulation.mode must be 'stochastic' or 'deterministic'");
  if (c.simulation.prior != "uniform" && c.simulation.prior != "truncated_normal")
    throw ConfigError("simulation.prior must be 'uniform' or 'truncated_normal'");
  if (!(c.simulation.phi_true > 0.0) || c.simulation.phi_true > 1.0)
    throw ConfigError("simulation.phi_true must lie in (0,1]");
  if (c.simulation.n_agents < 0 || c.simulation.rounds < 1)
    throw ConfigError("simulation population/rounds invalid");
  try {
    c.technology.validate();
    c.experiment.validate();
    c.population.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse failure: " + std::string(e.what()));
  }
  return config_from_json(j);
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["technology"] = {{"effort_exponent", c.technology.effort_exponent},
                     {"cost_exponent", c.technology.cost_exponent},
                     {"cost_scale", c.technology.cost_scale},
                     {"noise_sigma", c.technology.noise_sigma},
                     {"max_effort", c.technology.max_effort}};
  j["experiment"] = {{"rounds", c.experiment.rounds},
                     {"questions_per_round", c.experiment.questions_per_round},
                     {"marker_phi", c.experiment.marker_phi},
                     {"piece_rate_round", c.experiment.piece_rate_round},
                     {"piece_rate_final", c.experiment.piece_rate_final},
                     {"bdm_price_cap", c.experiment.bdm_price_cap},
                     {"confidence_bonus", c.experiment.confidence_bonus},
                     {"participation_fee", c.experiment.participation_fee}};
  j["population"] = {{"n_subjects", c.population.n_subjects},
                     {"ability_mean", c.population.ability_mean},
                     {"ability_sd", c.population.ability_sd},
                     {"ability_min", c.population.ability_min},
                     {"ability_max", c.population.ability_max},
                     {"overconfidence_mean", c.population.overconfidence_mean},
                     {"overconfidence_sd", c.population.overconfidence_sd},
                     {"believed_ability_min", c.population.believed_ability_min},
                     {"prior_mean_low", c.population.prior_mean_low},
                     {"prior_mean_high", c.population.prior_mean_high},
                     {"prior_sd", c.population.prior_sd},
                     {"bid_noise_sd", c.population.bid_noise_sd},
                     {"male_share", c.population.male_share},
                     {"white_share", c.population.white_share}};
  j["simulation"] = {{"n_agents", c.simulation.n_agents},
                     {"rounds", c.simulation.rounds},
                     {"phi_true", c.simulation.phi_true},
                     {"mode", c.simulation.mode},
                     {"ability_low", c.simulation.ability_low},
                     {"ability_high", c.simulation.ability_high},
                     {"offset_low", c.simulation.offset_low},
                     {"offset_high", c.simulation.offset_high},
                     {"prior", c.simulation.prior},
                     {"prior_mean_low", c.simulation.prior_mean_low},
                     {"prior_mean_high", c.simulation.prior_mean_high},
                     {"prior_sd", c.simulation.prior_sd}};
  j["equilibrium"] = {{"phi_true", c.equilibrium.phi_true},
                      {"true_ability", c.equilibrium.true_ability},
                      {"believed_ability", c.equilibrium.believed_ability}};
  return j;
}

}  // namespace mllab::cli
