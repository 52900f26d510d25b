#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <set>

#include "mllab/belief.hpp"
#include "mllab/csv.hpp"
#include "mllab/dynamic_panel.hpp"
#include "mllab/dynamics.hpp"
#include "mllab/equilibrium.hpp"
#include "mllab/kde.hpp"
#include "mllab/mixture.hpp"
#include "mllab/model.hpp"
#include "mllab/protocol.hpp"
#include "mllab/regression.hpp"
#include "mllab/stats.hpp"

namespace py = pybind11;
using namespace mllab;

namespace {

std::vector<Eigen::Vector2d> to_points(
    const std::vector<std::pair<double, double>>& xy) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(xy.size());
  for (const auto& [x, y] : xy) pts.emplace_back(x, y);
  return pts;
}

py::dict mixture_dict(const MixtureModel& m) {
  py::dict d;
  d["k"] = m.k();
  d["log_likelihood"] = m.log_likelihood;
  d["bic"] = m.bic;
  d["aic"] = m.aic;
  py::list weights, means;
  for (const auto& c : m.components) {
    weights.append(c.weight);
    means.append(py::make_tuple(c.mean[0], c.mean[1]));
  }
  d["weights"] = weights;
  d["means"] = means;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mllab, m) {
  m.doc() = "Belief-dynamics lab: model, equilibrium, dynamics, protocol, "
            "and estimators";

  py::class_<Technology>(m, "Technology")
      .def(py::init<>())
      .def_readwrite("effort_exponent", &Technology::effort_exponent)
      .def_readwrite("cost_exponent", &Technology::cost_exponent)
      .def_readwrite("cost_scale", &Technology::cost_scale)
      .def_readwrite("noise_sigma", &Technology::noise_sigma)
      .def_readwrite("max_effort", &Technology::max_effort)
      .def("output", &Technology::output)
      .def("cost", &Technology::cost);

  py::class_<AgentProfile>(m, "AgentProfile")
      .def(py::init<>())
      .def(py::init([](double a, double a_tilde, int id) {
             return AgentProfile{a, a_tilde, id};
           }),
           py::arg("true_ability"), py::arg("believed_ability"), py::arg("id") = 0)
      .def_readwrite("true_ability", &AgentProfile::true_ability)
      .def_readwrite("believed_ability", &AgentProfile::believed_ability)
      .def_readwrite("id", &AgentProfile::id)
      .def("delta", &AgentProfile::delta)
      .def("is_overconfident", [](const AgentProfile& a) {
        return a.classification() == Confidence::Overconfident;
      });

  m.def("optimal_effort", &optimal_effort, py::arg("tech"),
        py::arg("believed_ability"), py::arg("phi_belief"));
  m.def("expected_output", &expected_output);
  m.def("realized_output", &realized_output);
  m.def("gross_score", &gross_score);
  m.def("surprise", &surprise);

  py::class_<Equilibrium>(m, "Equilibrium")
      .def_readonly("phi_limit", &Equilibrium::phi_limit)
      .def_readonly("effort_limit", &Equilibrium::effort_limit)
      .def_readonly("boundary", &Equilibrium::boundary)
      .def_readonly("gamma_residual", &Equilibrium::gamma_residual);
  m.def("solve_equilibrium", &solve_equilibrium);

  py::class_<BeliefGrid>(m, "BeliefGrid")
      .def_static("uniform", &BeliefGrid::uniform,
                  py::arg("points") = BeliefGrid::kDefaultPoints)
      .def_static("truncated_normal", &BeliefGrid::truncated_normal,
                  py::arg("mean"), py::arg("sd"),
                  py::arg("points") = BeliefGrid::kDefaultPoints)
      .def("mean", &BeliefGrid::mean)
      .def("variance", &BeliefGrid::variance)
      .def("quantile", &BeliefGrid::quantile)
      .def_property_readonly("support", &BeliefGrid::support)
      .def_property_readonly("mass", &BeliefGrid::mass);
  m.def("bayes_update", &bayes_update);

  py::enum_<SimulationMode>(m, "SimulationMode")
      .value("Deterministic", SimulationMode::Deterministic)
      .value("Stochastic", SimulationMode::Stochastic);

  m.def(
      "simulate",
      [](const AgentProfile& agent, const Technology& tech, double phi_true,
         const BeliefGrid& prior, int rounds, std::uint64_t seed,
         SimulationMode mode) {
        py::list out;
        for (const auto& rec : simulate(agent, tech, phi_true, prior, rounds,
                                        seed, mode)) {
          py::dict d;
          d["round"] = rec.round;
          d["phi_point"] = rec.phi_point;
          d["effort"] = rec.effort;
          d["expected_output"] = rec.expected_output;
          d["realized_output"] = rec.realized_output;
          d["surprise"] = rec.surprise_realized;
          d["posterior_variance"] = rec.posterior_variance;
          out.append(d);
        }
        return out;
      },
      py::arg("agent"), py::arg("tech"), py::arg("phi_true"), py::arg("prior"),
      py::arg("rounds"), py::arg("seed"),
      py::arg("mode") = SimulationMode::Stochastic);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("rounds", &ExperimentConfig::rounds)
      .def_readwrite("questions_per_round", &ExperimentConfig::questions_per_round)
      .def_readwrite("marker_phi", &ExperimentConfig::marker_phi)
      .def_readwrite("piece_rate_round", &ExperimentConfig::piece_rate_round)
      .def_readwrite("piece_rate_final", &ExperimentConfig::piece_rate_final)
      .def_readwrite("bdm_price_cap", &ExperimentConfig::bdm_price_cap);

  py::class_<PopulationSpec>(m, "PopulationSpec")
      .def(py::init<>())
      .def_readwrite("n_subjects", &PopulationSpec::n_subjects)
      .def_readwrite("ability_mean", &PopulationSpec::ability_mean)
      .def_readwrite("ability_sd", &PopulationSpec::ability_sd)
      .def_readwrite("overconfidence_mean", &PopulationSpec::overconfidence_mean)
      .def_readwrite("overconfidence_sd", &PopulationSpec::overconfidence_sd)
      .def_readwrite("prior_sd", &PopulationSpec::prior_sd)
      .def_readwrite("bid_noise_sd", &PopulationSpec::bid_noise_sd);

  m.def("optimal_bid", &optimal_bid);
  m.def("recover_phi", [](double mark, double bid, const ExperimentConfig& cfg) {
    PhiRecovery rec = recover_phi(mark, bid, cfg);
    py::dict d;
    d["implied_score"] = rec.implied_score;
    d["phi_hat"] = rec.phi_hat;
    d["rejected"] = rec.rejected;
    return d;
  });
  m.def("classify_overconfident",
        [](int stated, int actual, const ExperimentConfig& cfg) {
          return classify_confidence(stated, actual, cfg) ==
                 Confidence::Overconfident;
        });

  m.def(
      "generate_panel_csv",
      [](const PopulationSpec& spec, const ExperimentConfig& config,
         std::uint64_t seed, const std::string& path) {
        PanelDataset panel = generate_panel(spec, config, seed);
        write_panel_csv(panel, path);
        return static_cast<int>(panel.records.size());
      },
      py::arg("spec"), py::arg("config"), py::arg("seed"), py::arg("path"));

  // Distribution kernels.
  m.def("normal_cdf", &stats::normal_cdf);
  m.def("student_t_cdf", &stats::student_t_cdf);
  m.def("chisq_cdf", &stats::chisq_cdf);
  m.def("f_cdf", &stats::f_cdf);

  m.def("paired_t_one_sided",
        [](const std::vector<double>& before, const std::vector<double>& after,
           const std::string& alternative) {
          TTestResult t = paired_t_one_sided(
              before, after,
              alternative == "less" ? Alternative::Less : Alternative::Greater);
          py::dict d;
          d["mean_difference"] = t.mean_difference;
          d["t_stat"] = t.t_stat;
          d["df"] = t.df;
          d["p_value"] = t.p_value;
          return d;
        },
        py::arg("before"), py::arg("after"), py::arg("alternative") = "greater");

  m.def(
      "ols",
      [](const std::vector<double>& y,
         const std::vector<std::vector<double>>& x_cols,
         const std::vector<std::string>& names, bool intercept) {
        Eigen::VectorXd yv(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) yv[i] = y[i];
        Eigen::MatrixXd X(y.size(), x_cols.size());
        for (std::size_t j = 0; j < x_cols.size(); ++j)
          for (std::size_t i = 0; i < y.size(); ++i) X(i, j) = x_cols[j][i];
        RegressionResult res = ols(yv, X, names, intercept);
        py::dict d;
        py::list coef, se, p;
        for (int i = 0; i < res.coef.size(); ++i) {
          coef.append(res.coef[i]);
          se.append(res.se[i]);
          p.append(res.p_value[i]);
        }
        d["names"] = res.names;
        d["coef"] = coef;
        d["se"] = se;
        d["p_value"] = p;
        d["r_squared"] = res.r_squared;
        d["adj_r_squared"] = res.adj_r_squared;
        d["n"] = res.n_obs;
        return d;
      },
      py::arg("y"), py::arg("x_cols"), py::arg("names"),
      py::arg("intercept") = true);

  m.def(
      "em_fit",
      [](const std::vector<std::pair<double, double>>& xy, int k,
         std::uint64_t seed, int n_init) {
        return mixture_dict(em_fit(to_points(xy), k, seed, n_init));
      },
      py::arg("points"), py::arg("k"), py::arg("seed"), py::arg("n_init") = 10);

  m.def(
      "select_model",
      [](const std::vector<std::pair<double, double>>& xy, int k_min, int k_max,
         const std::string& criterion, std::uint64_t seed) {
        ModelSelection sel =
            select_model(to_points(xy), k_min, k_max,
                         criterion == "aic" ? Criterion::Aic : Criterion::Bic, seed);
        py::dict d = mixture_dict(sel.best);
        py::list table;
        for (const auto& [k, score] : sel.score_table)
          table.append(py::make_tuple(k, score));
        d["score_table"] = table;
        return d;
      },
      py::arg("points"), py::arg("k_min") = 1, py::arg("k_max") = 15,
      py::arg("criterion") = "bic", py::arg("seed") = 0);

  m.def(
      "kde",
      [](const std::vector<double>& values, py::object bandwidth, int grid) {
        std::optional<double> h;
        if (!bandwidth.is_none()) h = bandwidth.cast<double>();
        KdeCurve curve = kde(values, h, grid);
        py::dict d;
        d["x"] = curve.x;
        d["density"] = curve.density;
        d["bandwidth"] = curve.bandwidth;
        return d;
      },
      py::arg("values"), py::arg("bandwidth") = py::none(),
      py::arg("grid_points") = 512);

  m.attr("__version__") = "0.1.0";
}
