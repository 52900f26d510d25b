#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "mllab/errors.hpp"

namespace {

using mllab::cli::Options;
using mllab::cli::ScenarioConfig;

ScenarioConfig resolve_config(const std::string& path) {
  if (path.empty()) return ScenarioConfig{};  // all defaults
  return mllab::cli::load_config(path);
}

void apply_out_override(Options& opt) {
  // MLLAB_OUT takes precedence over --out.
  if (const char* env = std::getenv("MLLAB_OUT"); env && *env) opt.out_dir = env;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"belief-dynamics lab: simulate, replicate, estimate"};
  app.require_subcommand(1);

  std::string config_path;
  Options opt;
  std::string rounds_arg = "1,5";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON scenario config");
    sub->add_option("--seed", opt.seed, "master seed");
    sub->add_option("--out", opt.out_dir, "output directory (env MLLAB_OUT overrides)");
  };

  CLI::App* eq = app.add_subcommand("equilibrium", "sweep limiting beliefs over a grid");
  add_common(eq);
  CLI::App* sim = app.add_subcommand("simulate", "belief-path simulations and figure");
  add_common(sim);
  CLI::App* panel = app.add_subcommand("panel", "generate a synthetic subject panel");
  add_common(panel);

  CLI::App* est = app.add_subcommand("estimate", "run an estimator battery on a panel");
  add_common(est);
  est->add_option("panel", opt.panel_path, "panel CSV path")->required();
  est->add_option("--which", opt.which,
                  "table2|table3|table4|table5|ttests|learning_effects")
      ->required();

  CLI::App* clu = app.add_subcommand("cluster", "mixture clustering of (mark, belief)");
  add_common(clu);
  clu->add_option("panel", opt.panel_path, "panel CSV path")->required();
  clu->add_option("--rounds", rounds_arg, "round pair, e.g. 1,5");
  clu->add_option("--criterion", opt.criterion, "bic|aic")
      ->check(CLI::IsMember({"bic", "aic"}));
  clu->add_option("--k-min", opt.k_min, "smallest component count to fit");
  clu->add_option("--k-max", opt.k_max, "largest component count to fit");
  clu->add_flag("--scale-check", opt.scale_check, "run the x10 scaling robustness check");

  CLI::App* fig = app.add_subcommand("figures", "belief distribution and mean figures");
  add_common(fig);
  fig->add_option("panel", opt.panel_path, "panel CSV path")->required();

  CLI::App* replay = app.add_subcommand("replay", "re-run a recorded manifest");
  std::string manifest_path;
  replay->add_option("manifest", manifest_path, "manifest.json path")->required();
  replay->add_option("--out", opt.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  apply_out_override(opt);

  try {
    if (eq->parsed()) return mllab::cli::cmd_equilibrium(resolve_config(config_path), opt);
    if (sim->parsed()) return mllab::cli::cmd_simulate(resolve_config(config_path), opt);
    if (panel->parsed()) return mllab::cli::cmd_panel(resolve_config(config_path), opt);
    if (est->parsed()) return mllab::cli::cmd_estimate(resolve_config(config_path), opt);
    if (clu->parsed()) {
      auto comma = rounds_arg.find(',');
      if (comma == std::string::npos)
        throw mllab::ConfigError("--rounds expects two comma-separated rounds");
      opt.rounds = {std::stoi(rounds_arg.substr(0, comma)),
                    std::stoi(rounds_arg.substr(comma + 1))};
      return mllab::cli::cmd_cluster(opt);
    }
    if (fig->parsed()) return mllab::cli::cmd_figures(resolve_config(config_path), opt);
    if (replay->parsed()) return mllab::cli::cmd_replay(manifest_path, opt);
  } catch (const mllab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mllab::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const mllab::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
