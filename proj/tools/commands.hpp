#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "config.hpp"
#include "manifest.hpp"

namespace mllab::cli {

extern const char* const kToolVersion;

struct Options {
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  std::string which;                 // estimate: table2..table5, ttests, learning_effects
  std::string panel_path;            // estimate/cluster/figures input
  std::pair<int, int> rounds{1, 5};  // cluster rounds pair
  std::string criterion = "bic";     // cluster criterion
  int k_min = 1;                     // cluster component range
  int k_max = 15;
  bool scale_check = false;
};

int cmd_equilibrium(const ScenarioConfig& config, const Options& opt);
int cmd_simulate(const ScenarioConfig& config, const Options& opt);
int cmd_panel(const ScenarioConfig& config, const Options& opt);
int cmd_estimate(const ScenarioConfig& config, const Options& opt);
int cmd_cluster(const Options& opt);
int cmd_figures(const ScenarioConfig& config, const Options& opt);
int cmd_replay(const std::string& manifest_path, const Options& opt);

}  // namespace mllab::cli
