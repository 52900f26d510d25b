#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mllab/model.hpp"
#include "mllab/protocol.hpp"

namespace mllab::cli {

/// Agent population for belief-path simulations: abilities and
/// overconfidence offsets drawn uniformly, heterogeneous priors.
struct SimulationSpec {
  int n_agents = 100;
  int rounds = 5;
  double phi_true = 0.5;
  std::string mode = "stochastic";  // or "deterministic"
  double ability_low = 2.5;
  double ability_high = 4.5;
  double offset_low = 1.0;   // believed = true + U(offset_low, offset_high)
  double offset_high = 3.0;
  std::string prior = "truncated_normal";  // or "uniform"
  double prior_mean_low = 0.40;
  double prior_mean_high = 0.90;
  double prior_sd = 0.15;
};

struct EquilibriumGrid {
  std::vector<double> phi_true{0.5};
  std::vector<double> true_ability{4.0};
  std::vector<double> believed_ability{5.0};
};

struct ScenarioConfig {
  Technology technology;
  ExperimentConfig experiment;
  PopulationSpec population;
  SimulationSpec simulation;
  EquilibriumGrid equilibrium;
};

/// Parses the JSON scenario file; absent keys keep their defaults,
/// malformed values raise ConfigError.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& config);

}  // namespace mllab::cli
