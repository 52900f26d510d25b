#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "mllab/csv.hpp"
#include "mllab/dynamic_panel.hpp"
#include "mllab/dynamics.hpp"
#include "mllab/equilibrium.hpp"
#include "mllab/errors.hpp"
#include "mllab/kde.hpp"
#include "mllab/mixture.hpp"
#include "mllab/regression.hpp"
#include "mllab/stats.hpp"
#include "mllab/svg.hpp"

namespace mllab::cli {

const char* const kToolVersion = "0.1.0";

namespace {

namespace fs = std::filesystem;

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory: " + dir);
}

std::string join(const std::string& dir, const std::string& name) {
  return dir + "/" + name;
}

std::string stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.10) return "*";
  return "";
}

std::string num(double v, int digits = 4) {
  if (std::isnan(v)) return "";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

/// Aligned plain-text table in the style of the published regression
/// tables: one row per statistic, one column per specification.
class TextTable {
public:
  explicit TextTable(std::string title) : title_(std::move(title)) {}

  void set_columns(std::vector<std::string> cols) { columns_ = std::move(cols); }
  void add_row(const std::string& label, std::vector<std::string> cells) {
    rows_.emplace_back(label, std::move(cells));
  }
  void add_separator() { rows_.emplace_back("---", std::vector<std::string>{}); }

  std::string str() const {
    std::size_t label_w = 0;
    for (const auto& [label, cells] : rows_) label_w = std::max(label_w, label.size());
    std::vector<std::size_t> col_w(columns_.size());
    for (std::size_t c = 0; c < columns_.size(); ++c) col_w[c] = columns_[c].size();
    for (const auto& [label, cells] : rows_)
      for (std::size_t c = 0; c < cells.size() && c < col_w.size(); ++c)
        col_w[c] = std::max(col_w[c], cells[c].size());

    std::ostringstream os;
    os << title_ << "\n";
    std::size_t total = label_w;
    for (std::size_t w : col_w) total += w + 2;
    os << std::string(total, '-') << "\n";
    os << std::string(label_w, ' ');
    for (std::size_t c = 0; c < columns_.size(); ++c)
      os << "  " << std::string(col_w[c] - columns_[c].size(), ' ') << columns_[c];
    os << "\n" << std::string(total, '-') << "\n";
    for (const auto& [label, cells] : rows_) {
      if (label == "---" && cells.empty()) {
        os << std::string(total, '-') << "\n";
        continue;
      }
      os << label << std::string(label_w - label.size(), ' ');
      for (std::size_t c = 0; c < cells.size(); ++c) {
        std::size_t w = c < col_w.size() ? col_w[c] : cells[c].size();
        os << "  " << std::string(w > cells[c].size() ? w - cells[c].size() : 0, ' ')
           << cells[c];
      }
      os << "\n";
    }
    os << std::string(total, '-') << "\n";
    return os.str();
  }

  void save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write " + path);
    os << str();
  }

private:
  std::string title_;
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::vector<std::string>>> rows_;
};

const char* kPathColors[10] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
                               "#bcbd22", "#17becf"};

LongPanel load_panel(const Options& opt) {
  if (opt.panel_path.empty()) throw DataError("no panel path given");
  return read_panel_csv(opt.panel_path);
}

std::vector<bool> group_rows(const LongPanel& panel, bool overconfident) {
  const Eigen::VectorXd& oc = panel.col("overconfident");
  std::vector<bool> keep(panel.rows());
  for (int i = 0; i < panel.rows(); ++i)
    keep[i] = (oc[i] > 0.5) == overconfident;
  return keep;
}

/// Per-subject phi value in a given round; NaN when excluded/missing.
std::map<int, double> round_values(const LongPanel& panel, const std::string& col,
                                   int round) {
  std::map<int, double> out;
  const Eigen::VectorXd& v = panel.col(col);
  for (int i = 0; i < panel.rows(); ++i)
    if (panel.round[i] == round) out[panel.subject[i]] = v[i];
  return out;
}

struct PairedSeries {
  std::vector<double> first, second;
};

PairedSeries paired_rounds(const LongPanel& panel, const std::string& col,
                           int r1, int r2) {
  auto a = round_values(panel, col, r1);
  auto b = round_values(panel, col, r2);
  PairedSeries out;
  for (const auto& [sid, v1] : a) {
    auto it = b.find(sid);
    if (it == b.end()) continue;
    if (std::isnan(v1) || std::isnan(it->second)) continue;
    out.first.push_back(v1);
    out.second.push_back(it->second);
  }
  return out;
}

}  // namespace

int cmd_equilibrium(const ScenarioConfig& config, const Options& opt) {
  ensure_out_dir(opt.out_dir);
  CsvTable table;
  table.header = {"phi_true", "true_ability", "believed_ability", "phi_limit",
                  "effort_limit", "boundary", "gamma_residual", "foc_residual"};
  for (double phi : config.equilibrium.phi_true)
    for (double a : config.equilibrium.true_ability)
      for (double at : config.equilibrium.believed_ability) {
        AgentProfile agent{a, at, 0};
        Equilibrium eq = solve_equilibrium(config.technology, agent, phi);
        table.rows.push_back({format_double(phi), format_double(a), format_double(at),
                              format_double(eq.phi_limit), format_double(eq.effort_limit),
                              eq.boundary ? "1" : "0", format_double(eq.gamma_residual),
                              format_double(eq.foc_residual)});
      }
  write_csv(table, join(opt.out_dir, "equilibrium.csv"));

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.scenario = "equilibrium";
  manifest.seed = opt.seed;
  manifest.config = config_to_json(config);
  manifest.artifacts = {"equilibrium.csv"};
  write_manifest(manifest, opt.out_dir);
  std::cout << "wrote " << table.rows.size() << " equilibria to "
            << join(opt.out_dir, "equilibrium.csv") << "\n";
  return 0;
}

int cmd_simulate(const ScenarioConfig& config, const Options& opt) {
  ensure_out_dir(opt.out_dir);
  const SimulationSpec& sim = config.simulation;

  std::vector<AgentSetup> population;
  population.reserve(sim.n_agents);
  for (int i = 0; i < sim.n_agents; ++i) {
    Rng rng(derive_seed(opt.seed, seed_stream::kReplication, i));
    AgentProfile agent;
    agent.id = i + 1;
    agent.true_ability = rng.uniform(sim.ability_low, sim.ability_high);
    agent.believed_ability =
        agent.true_ability + rng.uniform(sim.offset_low, sim.offset_high);
    BeliefGrid prior =
        sim.prior == "uniform"
            ? BeliefGrid::uniform()
            : BeliefGrid::truncated_normal(
                  rng.uniform(sim.prior_mean_low, sim.prior_mean_high), sim.prior_sd);
    population.push_back({agent, std::move(prior)});
  }
  SimulationMode mode = sim.mode == "deterministic" ? SimulationMode::Deterministic
                                                    : SimulationMode::Stochastic;
  auto rows = monte_carlo(population, config.technology, sim.phi_true, sim.rounds,
                          opt.seed, mode);

  CsvTable table;
  table.header = {"agent_id", "round", "phi_point", "effort", "expected_output",
                  "realized_output", "surprise", "posterior_variance"};
  for (const auto& row : rows)
    table.rows.push_back({std::to_string(row.agent_id), std::to_string(row.record.round),
                          format_double(row.record.phi_point),
                          format_double(row.record.effort),
                          format_double(row.record.expected_output),
                          format_double(row.record.realized_output),
                          format_double(row.record.surprise_realized),
                          format_double(row.record.posterior_variance)});
  write_csv(table, join(opt.out_dir, "trajectories.csv"));

  SvgFigure fig;
  fig.set_title("Belief paths");
  fig.set_labels("round", "belief about the marker");
  fig.set_range(1.0, std::max(1.0, static_cast<double>(sim.rounds)), 0.0, 1.0);
  std::map<int, std::vector<std::pair<double, double>>> paths;
  for (const auto& row : rows)
    paths[row.agent_id].emplace_back(row.record.round, row.record.phi_point);
  int color_idx = 0;
  for (const auto& [agent_id, path] : paths)
    fig.add_polyline(path, kPathColors[color_idx++ % 10], 1.0, 0.55);
  fig.add_hline(sim.phi_true, "#2ca02c");  // the true value of the fundamental
  fig.add_legend_entry("true marker value", "#2ca02c");
  fig.save(join(opt.out_dir, "beliefs.svg"));

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.scenario = "simulate";
  manifest.seed = opt.seed;
  manifest.config = config_to_json(config);
  manifest.artifacts = {"trajectories.csv", "beliefs.svg"};
  write_manifest(manifest, opt.out_dir);
  std::cout << "wrote " << rows.size() << " trajectory rows to "
            << join(opt.out_dir, "trajectories.csv") << "\n";
  return 0;
}

int cmd_panel(const ScenarioConfig& config, const Options& opt) {
  ensure_out_dir(opt.out_dir);
  PanelDataset panel = generate_panel(config.population, config.experiment, opt.seed);
  write_panel_csv(panel, join(opt.out_dir, "panel.csv"));

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.scenario = "panel";
  manifest.seed = opt.seed;
  manifest.config = config_to_json(config);
  manifest.artifacts = {"panel.csv"};
  write_manifest(manifest, opt.out_dir);
  std::cout << "wrote " << panel.records.size() << " rows ("
            << panel.subjects.size() << " subjects) to "
            << join(opt.out_dir, "panel.csv") << "\n";
  return 0;
}

namespace {

void estimate_table2(const LongPanel& panel, const Options& opt) {
  TextTable text("Beliefs about the marker by confidence group (OLS)");
  CsvTable csv;
  csv.header = {"round", "spec", "term", "coef", "se", "t", "p"};
  const std::vector<std::vector<std::string>> specs = {
      {"overconfident"},
      {"overconfident", "male"},
      {"overconfident", "male", "age"},
      {"overconfident", "male", "age", "white"}};

  std::vector<std::string> col_names;
  std::map<std::string, std::vector<std::string>> cells;  // term -> per column
  std::vector<std::string> term_order = {"overconfident", "male", "age", "white",
                                         "(intercept)"};
  std::vector<std::string> n_row, r2_row;
  for (int round : {1, 5}) {
    std::vector<bool> keep(panel.rows());
    for (int i = 0; i < panel.rows(); ++i) keep[i] = panel.round[i] == round;
    LongPanel cross = panel.filter(keep);
    int spec_id = 0;
    for (const auto& vars : specs) {
      ++spec_id;
      col_names.push_back("r" + std::to_string(round) + "(" + std::to_string(spec_id) +
                          ")");
      try {
        Eigen::MatrixXd X(cross.rows(), vars.size());
        for (std::size_t j = 0; j < vars.size(); ++j) X.col(j) = cross.col(vars[j]);
        RegressionResult res = ols(cross.col("phi_hat"), X, vars, true);
        for (const auto& term : term_order) {
          int idx = res.index_of(term);
          cells[term].push_back(
              idx >= 0 ? num(res.coef[idx]) + stars(res.p_value[idx]) : "");
          cells[term + "_se"].push_back(idx >= 0 ? "(" + num(res.se[idx], 4) + ")"
                                                 : "");
          if (idx >= 0)
            csv.rows.push_back({std::to_string(round), std::to_string(spec_id), term,
                                format_double(res.coef[idx]),
                                format_double(res.se[idx]),
                                format_double(res.t_stat[idx]),
                                format_double(res.p_value[idx])});
        }
        n_row.push_back(std::to_string(res.n_obs));
        r2_row.push_back(num(res.adj_r_squared, 3));
      } catch (const NumericalError& e) {
        std::cout << "warning: round " << round << " spec " << spec_id << ": "
                  << e.what() << "\n";
        for (const auto& term : term_order) {
          cells[term].push_back("-");
          cells[term + "_se"].push_back("");
        }
        n_row.push_back("-");
        r2_row.push_back("-");
      }
    }
  }
  text.set_columns(col_names);
  for (const auto& term : term_order) {
    text.add_row(term, cells[term]);
    text.add_row("", cells[term + "_se"]);
  }
  text.add_separator();
  text.add_row("N", n_row);
  text.add_row("adj R2", r2_row);
  text.save(join(opt.out_dir, "table2.txt"));
  write_csv(csv, join(opt.out_dir, "table2.csv"));
  std::cout << text.str();
}

void estimate_table3(const LongPanel& panel, const Options& opt) {
  LongPanel pooled = panel;
  // Interaction column for the pooled specification.
  Eigen::VectorXd round_v(panel.rows());
  for (int i = 0; i < panel.rows(); ++i) round_v[i] = panel.round[i];
  pooled.columns["round"] = round_v;
  pooled.columns["round_x_overconfident"] =
      round_v.cwiseProduct(panel.col("overconfident"));

  TextTable text("Effect of updating on effort provision (random effects)");
  text.set_columns({"(1) overconf", "(2) underconf", "(3) pooled"});
  CsvTable csv;
  csv.header = {"spec", "term", "coef", "se", "t", "p"};

  std::vector<std::optional<RegressionResult>> results;
  auto fit = [&](const LongPanel& sample,
                 const std::vector<std::string>& vars) -> std::optional<RegressionResult> {
    try {
      return random_effects(sample, "effort_seconds", vars);
    } catch (const NumericalError& e) {
      std::cout << "warning: random effects: " << e.what() << "\n";
      return std::nullopt;
    }
  };
  results.push_back(fit(pooled.filter(group_rows(pooled, true)), {"round"}));
  results.push_back(fit(pooled.filter(group_rows(pooled, false)), {"round"}));
  results.push_back(
      fit(pooled, {"round", "overconfident", "round_x_overconfident"}));

  std::vector<std::string> terms = {"round", "overconfident", "round_x_overconfident",
                                    "(intercept)"};
  for (const auto& term : terms) {
    std::vector<std::string> coef_cells, se_cells;
    for (std::size_t s = 0; s < results.size(); ++s) {
      int idx = results[s] ? results[s]->index_of(term) : -1;
      coef_cells.push_back(idx >= 0 ? num(results[s]->coef[idx], 2) +
                                          stars(results[s]->p_value[idx])
                                    : "");
      se_cells.push_back(idx >= 0 ? "(" + num(results[s]->se[idx], 2) + ")" : "");
      if (idx >= 0)
        csv.rows.push_back({std::to_string(s + 1), term,
                            format_double(results[s]->coef[idx]),
                            format_double(results[s]->se[idx]),
                            format_double(results[s]->t_stat[idx]),
                            format_double(results[s]->p_value[idx])});
    }
    text.add_row(term, coef_cells);
    text.add_row("", se_cells);
  }
  text.add_separator();
  std::vector<std::string> n_cells;
  for (const auto& r : results)
    n_cells.push_back(r ? std::to_string(r->n_obs) : "-");
  text.add_row("N", n_cells);
  text.save(join(opt.out_dir, "table3.txt"));
  write_csv(csv, join(opt.out_dir, "table3.csv"));
  std::cout << text.str();
}

void run_gmm_table(const LongPanel& sample, const std::string& dep,
                   const std::string& title, const std::string& stem,
                   const Options& opt) {
  struct Spec {
    std::string label;
    std::set<GmmInstrument> instruments;
  };
  const std::vector<Spec> specs = {
      {"(1) lag2 dep", {GmmInstrument::Lag2Dep}},
      {"(2) lag effort", {GmmInstrument::LagEffort}},
      {"(3) both", {GmmInstrument::LagEffort, GmmInstrument::Lag2Dep}}};

  TextTable text(title);
  CsvTable csv;
  csv.header = {"spec", "beta_round", "beta_se", "gamma_lag", "gamma_se", "sargan_j",
                "sargan_p", "first_stage_f", "m1", "m2", "n"};
  std::vector<std::string> cols, beta_cells, beta_se_cells, gamma_cells,
      gamma_se_cells, j_cells, f_cells, m1_cells, m2_cells, n_cells;
  for (const auto& spec : specs) {
    cols.push_back(spec.label);
    try {
      GmmResult res = diff_gmm(sample, dep, spec.instruments);
      double beta_p =
          2.0 * (1.0 - stats::normal_cdf(std::fabs(res.beta / res.beta_se)));
      double gamma_p =
          2.0 * (1.0 - stats::normal_cdf(std::fabs(res.gamma / res.gamma_se)));
      beta_cells.push_back(num(res.beta, 4) + stars(beta_p));
      beta_se_cells.push_back("(" + num(res.beta_se, 4) + ")");
      gamma_cells.push_back(num(res.gamma, 4) + stars(gamma_p));
      gamma_se_cells.push_back("(" + num(res.gamma_se, 4) + ")");
      j_cells.push_back(res.sargan_applicable ? num(res.sargan_j, 2) : "n/a");
      f_cells.push_back(num(res.first_stage_f, 2));
      m1_cells.push_back(num(res.ar1_stat, 2));
      m2_cells.push_back(std::isnan(res.ar2_stat) ? "n/a" : num(res.ar2_stat, 2));
      n_cells.push_back(std::to_string(res.n_obs));
      csv.rows.push_back(
          {spec.label, format_double(res.beta), format_double(res.beta_se),
           format_double(res.gamma), format_double(res.gamma_se),
           res.sargan_applicable ? format_double(res.sargan_j) : "",
           res.sargan_applicable ? format_double(res.sargan_p) : "",
           format_double(res.first_stage_f), format_double(res.ar1_stat),
           format_double(res.ar2_stat), std::to_string(res.n_obs)});
    } catch (const NumericalError& e) {
      std::cout << "warning: " << spec.label << ": " << e.what() << "\n";
      beta_cells.push_back("-");
      beta_se_cells.push_back("");
      gamma_cells.push_back("-");
      gamma_se_cells.push_back("");
      j_cells.push_back("-");
      f_cells.push_back("-");
      m1_cells.push_back("-");
      m2_cells.push_back("-");
      n_cells.push_back("-");
    }
  }
  text.set_columns(cols);
  text.add_row("d round (drift)", beta_cells);
  text.add_row("", beta_se_cells);
  text.add_row("d dep lag", gamma_cells);
  text.add_row("", gamma_se_cells);
  text.add_separator();
  text.add_row("Sargan J", j_cells);
  text.add_row("first-stage F", f_cells);
  text.add_row("autocorr m1", m1_cells);
  text.add_row("autocorr m2", m2_cells);
  text.add_row("N", n_cells);
  text.save(join(opt.out_dir, stem + ".txt"));
  write_csv(csv, join(opt.out_dir, stem + ".csv"));
  std::cout << text.str();
}

void estimate_ttests(const LongPanel& panel, const Options& opt,
                     double marker_phi) {
  std::ostringstream out;
  auto run_pairs = [&](const LongPanel& sample, const std::string& col,
                       const std::string& label) {
    for (int later : {5, 4, 3, 2}) {
      try {
        PairedSeries series = paired_rounds(sample, col, 1, later);
        TTestResult t =
            paired_t_one_sided(series.first, series.second, Alternative::Less);
        out << label << ", round 1 vs " << later << ": (" << num(t.mean_difference, 3)
            << ", p-value: " << num(t.p_value, 3) << ")\n";
      } catch (const NumericalError& e) {
        out << label << ", round 1 vs " << later << ": warning: " << e.what() << "\n";
      } catch (const std::invalid_argument& e) {
        out << label << ", round 1 vs " << later << ": warning: " << e.what() << "\n";
      }
    }
  };

  LongPanel over = panel.filter(group_rows(panel, true));
  run_pairs(over, "phi_hat", "overconfident beliefs");

  LongPanel under = panel.filter(group_rows(panel, false));
  under.columns["disp_sq"] =
      variance_target(under, "phi_hat", VarianceMode::SqDevFromRoundMean);
  under.columns["disp_abs"] =
      variance_target(under, "phi_hat", VarianceMode::AbsDevFromRoundMean);
  under.columns["disp_truth"] =
      variance_target(under, "phi_hat", VarianceMode::SqDevFromTruth, marker_phi);
  run_pairs(under, "disp_sq", "underconfident dispersion (sq dev from round mean)");
  run_pairs(under, "disp_abs", "underconfident dispersion (abs dev, robustness)");
  run_pairs(under, "disp_truth",
            "underconfident dispersion (sq dev from truth, robustness)");

  std::ofstream os(join(opt.out_dir, "ttests.txt"), std::ios::binary);
  if (!os) throw DataError("cannot write ttests.txt");
  os << out.str();
  std::cout << out.str();
}

void estimate_learning_effects(const LongPanel& panel, const Options& opt) {
  LongPanel with_round = panel;
  Eigen::VectorXd round_v(panel.rows());
  for (int i = 0; i < panel.rows(); ++i) round_v[i] = panel.round[i];
  with_round.columns["round"] = round_v;

  TextTable text("Score drift across rounds (within-subject fixed effects)");
  text.set_columns({"overconfident", "underconfident"});
  CsvTable csv;
  csv.header = {"group", "coef_round", "se", "t", "p", "hausman_stat", "hausman_p"};
  std::vector<std::string> coef_cells, se_cells, n_cells, hausman_cells;
  for (bool over : {true, false}) {
    try {
      LongPanel sample = with_round.filter(group_rows(with_round, over));
      RegressionResult fe = within_fe(sample, "score", {"round"});
      RegressionResult re = random_effects(sample, "score", {"round"});
      HausmanResult h = hausman(fe, re);
      int idx = fe.index_of("round");
      coef_cells.push_back(num(fe.coef[idx], 4) + stars(fe.p_value[idx]));
      se_cells.push_back("(" + num(fe.se[idx], 4) + ")");
      n_cells.push_back(std::to_string(fe.n_obs));
      hausman_cells.push_back(num(h.statistic, 2) + " (p=" + num(h.p_value, 4) + ")");
      csv.rows.push_back({over ? "overconfident" : "underconfident",
                          format_double(fe.coef[idx]), format_double(fe.se[idx]),
                          format_double(fe.t_stat[idx]), format_double(fe.p_value[idx]),
                          format_double(h.statistic), format_double(h.p_value)});
    } catch (const NumericalError& e) {
      std::cout << "warning: " << (over ? "overconfident" : "underconfident")
                << " group: " << e.what() << "\n";
      coef_cells.push_back("-");
      se_cells.push_back("");
      n_cells.push_back("-");
      hausman_cells.push_back("-");
    }
  }
  text.add_row("round", coef_cells);
  text.add_row("", se_cells);
  text.add_separator();
  text.add_row("N", n_cells);
  text.add_row("Hausman", hausman_cells);
  text.save(join(opt.out_dir, "learning_effects.txt"));
  write_csv(csv, join(opt.out_dir, "learning_effects.csv"));
  std::cout << text.str();
}

}  // namespace

int cmd_estimate(const ScenarioConfig& config, const Options& opt) {
  ensure_out_dir(opt.out_dir);
  LongPanel panel = load_panel(opt);

  double marker_phi = config.experiment.marker_phi;  // truth-distance tests
  std::vector<std::string> artifacts;
  if (opt.which == "table2") {
    estimate_table2(panel, opt);
    artifacts = {"table2.txt", "table2.csv"};
  } else if (opt.which == "table3") {
    estimate_table3(panel, opt);
    artifacts = {"table3.txt", "table3.csv"};
  } else if (opt.which == "table4") {
    run_gmm_table(panel.filter(group_rows(panel, true)), "phi_hat",
                  "Updating and overconfident subjects' beliefs (difference GMM)",
                  "table4", opt);
    artifacts = {"table4.txt", "table4.csv"};
  } else if (opt.which == "table5") {
    LongPanel under = panel.filter(group_rows(panel, false));
    under.columns["disp_sq"] =
        variance_target(under, "phi_hat", VarianceMode::SqDevFromRoundMean);
    run_gmm_table(under, "disp_sq",
                  "Updating and underconfident subjects' dispersion (difference GMM)",
                  "table5", opt);
    artifacts = {"table5.txt", "table5.csv"};
  } else if (opt.which == "ttests") {
    estimate_ttests(panel, opt, marker_phi);
    artifacts = {"ttests.txt"};
  } else if (opt.which == "learning_effects") {
    estimate_learning_effects(panel, opt);
    artifacts = {"learning_effects.txt", "learning_effects.csv"};
  } else {
    throw ConfigError("unknown --which: '" + opt.which +
                      "' (table2|table3|table4|table5|ttests|learning_effects)");
  }

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.scenario = "estimate";
  manifest.seed = opt.seed;
  manifest.config = config_to_json(config);
  manifest.options = {{"which", opt.which}, {"panel", opt.panel_path}};
  manifest.artifacts = artifacts;
  write_manifest(manifest, opt.out_dir);
  return 0;
}

int cmd_cluster(const Options& opt) {
  ensure_out_dir(opt.out_dir);
  LongPanel panel = load_panel(opt);

  // Overconfident subjects' (mark, phi_hat) points for the two rounds.
  std::vector<Eigen::Vector2d> points;
  std::vector<std::pair<int, int>> ids;  // (subject, round)
  const Eigen::VectorXd& mark = panel.col("mark");
  const Eigen::VectorXd& phi = panel.col("phi_hat");
  const Eigen::VectorXd& oc = panel.col("overconfident");
  for (int i = 0; i < panel.rows(); ++i) {
    if (oc[i] < 0.5) continue;
    if (panel.round[i] != opt.rounds.first && panel.round[i] != opt.rounds.second)
      continue;
    if (std::isnan(phi[i])) continue;
    points.emplace_back(mark[i], phi[i]);
    ids.emplace_back(panel.subject[i], panel.round[i]);
  }
  if (points.size() < 2) throw DataError("too few usable points for clustering");

  Criterion criterion = opt.criterion == "aic" ? Criterion::Aic : Criterion::Bic;
  ModelSelection sel = select_model(points, opt.k_min, opt.k_max, criterion, opt.seed);
  std::vector<int> labels = sel.best.hard_assignment(points);

  CsvTable assignments;
  assignments.header = {"subject_id", "round", "mark", "phi_hat", "cluster"};
  for (std::size_t i = 0; i < points.size(); ++i)
    assignments.rows.push_back({std::to_string(ids[i].first),
                                std::to_string(ids[i].second),
                                format_double(points[i][0]),
                                format_double(points[i][1]),
                                std::to_string(labels[i])});
  write_csv(assignments, join(opt.out_dir, "cluster_assignments.csv"));

  CsvTable scores;
  scores.header = {"k", opt.criterion};
  for (const auto& [k, score] : sel.score_table)
    scores.rows.push_back({std::to_string(k), format_double(score)});
  write_csv(scores, join(opt.out_dir, "cluster_scores.csv"));

  SvgFigure fig;
  fig.set_title("Clusters for rounds " + std::to_string(opt.rounds.first) + " and " +
                std::to_string(opt.rounds.second));
  fig.set_labels("mark", "recovered belief");
  double xmax = 0, ymax = 0;
  for (const auto& p : points) {
    xmax = std::max(xmax, p[0]);
    ymax = std::max(ymax, p[1]);
  }
  fig.set_range(0.0, xmax * 1.05 + 1e-9, 0.0, ymax * 1.05 + 1e-9);
  std::map<int, std::vector<std::pair<double, double>>> by_cluster;
  for (std::size_t i = 0; i < points.size(); ++i)
    by_cluster[labels[i]].emplace_back(points[i][0], points[i][1]);
  for (const auto& [cluster, pts] : by_cluster) {
    fig.add_scatter(pts, kPathColors[cluster % 10]);
    fig.add_legend_entry("cluster " + std::to_string(cluster),
                         kPathColors[cluster % 10]);
  }
  fig.save(join(opt.out_dir, "clusters.svg"));

  std::vector<std::string> artifacts = {"cluster_assignments.csv",
                                        "cluster_scores.csv", "clusters.svg"};
  std::ostringstream summary;
  summary << "selected k=" << sel.best.k() << " by " << opt.criterion << "\n";

  if (opt.scale_check) {
    ScaleRobustnessReport rep = scale_robustness(points, 1, 10.0, criterion,
                                                 opt.seed, opt.k_min, opt.k_max);
    ModelSelection aic_sel =
        select_model(points, opt.k_min, opt.k_max, Criterion::Aic, opt.seed);
    double aic_rand = rand_index(labels, aic_sel.best.hard_assignment(points));
    std::ofstream os(join(opt.out_dir, "cluster_robustness.txt"), std::ios::binary);
    os << "x10 scaling of the belief dimension: selected k=" << rep.scaled.best.k()
       << ", Rand index vs base = " << num(rep.rand, 4) << "\n";
    os << "criterion swap to AIC: selected k=" << aic_sel.best.k()
       << ", Rand index vs base = " << num(aic_rand, 4) << "\n";
    artifacts.push_back("cluster_robustness.txt");
    summary << "x10 scale check Rand index = " << num(rep.rand, 4) << "\n";
  }

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.scenario = "cluster";
  manifest.seed = opt.seed;
  manifest.options = {{"panel", opt.panel_path},
                      {"rounds", {opt.rounds.first, opt.rounds.second}},
                      {"criterion", opt.criterion},
                      {"k_min", opt.k_min},
                      {"k_max", opt.k_max},
                      {"scale_check", opt.scale_check}};
  manifest.artifacts = artifacts;
  write_manifest(manifest, opt.out_dir);
  std::cout << summary.str();
  return 0;
}

int cmd_figures(const ScenarioConfig& config, const Options& opt) {
  ensure_out_dir(opt.out_dir);
  LongPanel panel = load_panel(opt);
  double marker_phi = config.experiment.marker_phi;

  int max_round = 1;
  for (int r : panel.round) max_round = std::max(max_round, r);

  // Belief distributions per round per group, kernel-density estimated.
  for (bool over : {true, false}) {
    LongPanel sample = panel.filter(group_rows(panel, over));
    SvgFigure fig;
    fig.set_title(std::string(over ? "Overconfident" : "Underconfident") +
                  " subjects' beliefs by round");
    fig.set_labels("recovered belief", "density");
    double dmax = 1.0;
    std::vector<KdeCurve> curves;
    std::vector<int> curve_rounds;
    for (int r = 1; r <= max_round; ++r) {
      std::vector<double> values;
      const Eigen::VectorXd& phi = sample.col("phi_hat");
      for (int i = 0; i < sample.rows(); ++i)
        if (sample.round[i] == r && !std::isnan(phi[i])) values.push_back(phi[i]);
      if (values.size() < 2) continue;
      try {
        KdeCurve curve = kde(values);
        for (double d : curve.density) dmax = std::max(dmax, d);
        curves.push_back(std::move(curve));
        curve_rounds.push_back(r);
      } catch (const std::invalid_argument& e) {
        // Degenerate (constant) round: no density curve to draw.
        std::cout << "warning: round " << r << ": " << e.what() << "\n";
      }
    }
    fig.set_range(-0.1, 1.1, 0.0, dmax * 1.05);
    for (std::size_t c = 0; c < curves.size(); ++c) {
      std::vector<std::pair<double, double>> pts;
      for (std::size_t i = 0; i < curves[c].x.size(); ++i)
        pts.emplace_back(curves[c].x[i], curves[c].density[i]);
      fig.add_polyline(pts, kPathColors[c % 10]);
      fig.add_legend_entry("round " + std::to_string(curve_rounds[c]),
                           kPathColors[c % 10]);
    }
    fig.add_vline(marker_phi, "#2ca02c");
    fig.add_legend_entry("true marker value", "#2ca02c");
    fig.save(join(opt.out_dir,
                  over ? "fig3_overconfident.svg" : "fig3_underconfident.svg"));
  }

  // Mean belief per round with +-2 sd bands.
  {
    SvgFigure fig;
    fig.set_title("Mean beliefs by round");
    fig.set_labels("round", "recovered belief");
    fig.set_range(1.0, static_cast<double>(std::max(2, max_round)), -0.5, 1.25);
    const char* colors[2] = {"#1f77b4", "#d62728"};
    int color_idx = 0;
    for (bool over : {true, false}) {
      LongPanel sample = panel.filter(group_rows(panel, over));
      std::vector<double> xs, mean, lo, hi;
      const Eigen::VectorXd& phi = sample.col("phi_hat");
      for (int r = 1; r <= max_round; ++r) {
        double sum = 0.0, sum2 = 0.0;
        int n = 0;
        for (int i = 0; i < sample.rows(); ++i) {
          if (sample.round[i] != r || std::isnan(phi[i])) continue;
          sum += phi[i];
          sum2 += phi[i] * phi[i];
          ++n;
        }
        if (n < 2) continue;
        double m = sum / n;
        double sd = std::sqrt(std::max(0.0, (sum2 - n * m * m) / (n - 1)));
        xs.push_back(r);
        mean.push_back(m);
        lo.push_back(m - 2.0 * sd);
        hi.push_back(m + 2.0 * sd);
      }
      if (xs.empty()) continue;
      fig.add_band(xs, lo, hi, colors[color_idx], 0.18);
      std::vector<std::pair<double, double>> pts;
      for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(xs[i], mean[i]);
      fig.add_polyline(pts, colors[color_idx], 2.0);
      fig.add_legend_entry(over ? "overconfident" : "underconfident",
                           colors[color_idx]);
      ++color_idx;
    }
    fig.add_hline(marker_phi, "#2ca02c");
    fig.add_legend_entry("true marker value", "#2ca02c");
    fig.save(join(opt.out_dir, "fig4_mean_beliefs.svg"));
  }

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.scenario = "figures";
  manifest.seed = opt.seed;
  manifest.config = config_to_json(config);
  manifest.options = {{"panel", opt.panel_path}};
  manifest.artifacts = {"fig3_overconfident.svg", "fig3_underconfident.svg",
                        "fig4_mean_beliefs.svg"};
  write_manifest(manifest, opt.out_dir);
  std::cout << "wrote figures to " << opt.out_dir << "\n";
  return 0;
}

int cmd_replay(const std::string& manifest_path, const Options& opt) {
  RunManifest manifest = read_manifest(manifest_path);
  Options replay_opt = opt;
  replay_opt.seed = manifest.seed;
  if (manifest.options.contains("which"))
    replay_opt.which = manifest.options["which"].get<std::string>();
  if (manifest.options.contains("panel"))
    replay_opt.panel_path = manifest.options["panel"].get<std::string>();
  if (manifest.options.contains("criterion"))
    replay_opt.criterion = manifest.options["criterion"].get<std::string>();
  if (manifest.options.contains("scale_check"))
    replay_opt.scale_check = manifest.options["scale_check"].get<bool>();
  if (manifest.options.contains("rounds")) {
    auto r = manifest.options["rounds"];
    replay_opt.rounds = {r.at(0).get<int>(), r.at(1).get<int>()};
  }
  if (manifest.options.contains("k_min"))
    replay_opt.k_min = manifest.options["k_min"].get<int>();
  if (manifest.options.contains("k_max"))
    replay_opt.k_max = manifest.options["k_max"].get<int>();

  if (manifest.scenario == "equilibrium")
    return cmd_equilibrium(config_from_json(manifest.config), replay_opt);
  if (manifest.scenario == "simulate")
    return cmd_simulate(config_from_json(manifest.config), replay_opt);
  if (manifest.scenario == "panel")
    return cmd_panel(config_from_json(manifest.config), replay_opt);
  if (manifest.scenario == "estimate")
    return cmd_estimate(config_from_json(manifest.config), replay_opt);
  if (manifest.scenario == "cluster") return cmd_cluster(replay_opt);
  if (manifest.scenario == "figures")
    return cmd_figures(config_from_json(manifest.config), replay_opt);
  throw ConfigError("manifest scenario unknown: " + manifest.scenario);
}

}  // namespace mllab::cli
