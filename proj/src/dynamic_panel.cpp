#include "mllab/dynamic_panel.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "mllab/errors.hpp"
#include "mllab/stats.hpp"

namespace mllab {

namespace {

struct DiffRow {
  int subject_key = 0;  // consecutive subject index
  int round = 0;        // round of dy_t
  double dy = 0.0;      // dy_t
  double dy_lag = 0.0;  // dy_{t-1}
  double z_eff = 0.0;   // d effort_{t-1}; NaN when unavailable
  double z_dep2 = 0.0;  // dy_{t-2};      NaN when unavailable
};

}  // namespace

GmmResult diff_gmm(const LongPanel& panel, const std::string& dep,
                   const std::set<GmmInstrument>& instruments,
                   const std::string& effort_col) {
  if (instruments.empty())
    throw UnderidentifiedError("diff_gmm: no instruments selected");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const Eigen::VectorXd& y = panel.col(dep);
  const Eigen::VectorXd& eff = panel.col(effort_col);

  // Per subject: round -> row index, NaNs treated as missing.
  std::map<int, std::map<int, int>> by_subject;
  for (int i = 0; i < panel.rows(); ++i)
    by_subject[panel.subject[i]][panel.round[i]] = i;

  auto value_at = [&](const Eigen::VectorXd& v, const std::map<int, int>& rounds,
                      int t) -> double {
    auto it = rounds.find(t);
    if (it == rounds.end()) return nan;
    return v[it->second];
  };

  std::vector<DiffRow> rows;  // every row where dy_t and dy_{t-1} exist
  int subject_key = 0;
  for (const auto& [sid, rounds] : by_subject) {
    bool used = false;
    for (const auto& [t, idx] : rounds) {
      double y_t = value_at(y, rounds, t);
      double y_1 = value_at(y, rounds, t - 1);
      double y_2 = value_at(y, rounds, t - 2);
      double y_3 = value_at(y, rounds, t - 3);
      if (std::isnan(y_t) || std::isnan(y_1) || std::isnan(y_2)) continue;
      DiffRow row;
      row.subject_key = subject_key;
      row.round = t;
      row.dy = y_t - y_1;
      row.dy_lag = y_1 - y_2;
      double e_1 = value_at(eff, rounds, t - 1);
      double e_2 = value_at(eff, rounds, t - 2);
      row.z_eff = (std::isnan(e_1) || std::isnan(e_2)) ? nan : e_1 - e_2;
      row.z_dep2 = std::isnan(y_3) ? nan : y_2 - y_3;
      rows.push_back(row);
      used = true;
    }
    if (used) ++subject_key;
  }

  bool use_eff = instruments.count(GmmInstrument::LagEffort) > 0;
  bool use_dep2 = instruments.count(GmmInstrument::Lag2Dep) > 0;

  // Estimation sample: rows where every selected instrument exists.
  std::vector<int> est;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (use_eff && std::isnan(rows[i].z_eff)) continue;
    if (use_dep2 && std::isnan(rows[i].z_dep2)) continue;
    est.push_back(static_cast<int>(i));
  }

  int n = static_cast<int>(est.size());
  int n_instr = 1 + (use_eff ? 1 : 0) + (use_dep2 ? 1 : 0);
  constexpr int kParams = 2;  // drift + lagged dep
  if (n <= n_instr || n_instr < kParams)
    throw UnderidentifiedError(
        "diff_gmm: " + std::to_string(n) + " usable rows, " +
        std::to_string(n_instr) + " moment conditions; cannot identify 2 parameters");

  Eigen::VectorXd Y(n);
  Eigen::MatrixXd X(n, kParams);
  Eigen::MatrixXd Z(n, n_instr);
  std::vector<int> cluster(n);
  for (int i = 0; i < n; ++i) {
    const DiffRow& r = rows[est[i]];
    Y[i] = r.dy;
    X(i, 0) = 1.0;
    X(i, 1) = r.dy_lag;
    Z(i, 0) = 1.0;
    int c = 1;
    if (use_eff) Z(i, c++) = r.z_eff;
    if (use_dep2) Z(i, c++) = r.z_dep2;
    cluster[i] = r.subject_key;
  }

  // Step 1: 2SLS.
  Eigen::MatrixXd Zt_Z = Z.transpose() * Z;
  Eigen::MatrixXd Zt_X = Z.transpose() * X;
  Eigen::VectorXd Zt_Y = Z.transpose() * Y;
  Eigen::LDLT<Eigen::MatrixXd> zz(Zt_Z);
  if (zz.info() != Eigen::Success || zz.isNegative())
    throw UnderidentifiedError("diff_gmm: instrument cross-product is singular");
  Eigen::MatrixXd XPzX = Zt_X.transpose() * zz.solve(Zt_X);
  Eigen::LDLT<Eigen::MatrixXd> xpx(XPzX);
  if (xpx.info() != Eigen::Success)
    throw UnderidentifiedError("diff_gmm: instruments do not span the regressors");
  Eigen::VectorXd b1 = xpx.solve(Zt_X.transpose() * zz.solve(Zt_Y));

  // Step 2: optimal weight from subject-clustered step-1 residual moments.
  Eigen::VectorXd u1 = Y - X * b1;
  int n_clusters = 0;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n_instr, n_instr);
  {
    std::map<int, Eigen::VectorXd> cluster_moment;
    for (int i = 0; i < n; ++i) {
      auto [it, inserted] = cluster_moment.try_emplace(
          cluster[i], Eigen::VectorXd::Zero(n_instr));
      it->second += Z.row(i).transpose() * u1[i];
    }
    for (const auto& [c, m] : cluster_moment) S += m * m.transpose();
    n_clusters = static_cast<int>(cluster_moment.size());
  }
  Eigen::LDLT<Eigen::MatrixXd> s_ldlt(S);
  if (s_ldlt.info() != Eigen::Success || s_ldlt.isNegative())
    throw UnderidentifiedError("diff_gmm: singular moment covariance");

  Eigen::MatrixXd XtZ = Zt_X.transpose();
  Eigen::MatrixXd A = XtZ * s_ldlt.solve(Zt_X);       // X'Z W Z'X
  Eigen::LDLT<Eigen::MatrixXd> a_ldlt(A);
  Eigen::VectorXd b2 = a_ldlt.solve(XtZ * s_ldlt.solve(Zt_Y));
  Eigen::MatrixXd V = a_ldlt.solve(Eigen::MatrixXd::Identity(kParams, kParams));

  GmmResult res;
  res.beta = b2[0];
  res.gamma = b2[1];
  res.beta_se = std::sqrt(V(0, 0));
  res.gamma_se = std::sqrt(V(1, 1));
  res.n_obs = n;
  res.n_subjects = n_clusters;
  res.instrument_names.push_back("(constant)");
  if (use_eff) res.instrument_names.push_back("d_effort_lag1");
  if (use_dep2) res.instrument_names.push_back("d_dep_lag2");

  // Sargan/Hansen J on the second-step residual moments.
  res.sargan_df = n_instr - kParams;
  if (res.sargan_df > 0) {
    Eigen::VectorXd u2 = Y - X * b2;
    Eigen::VectorXd g = Z.transpose() * u2;
    res.sargan_applicable = true;
    res.sargan_j = g.dot(s_ldlt.solve(g));
    res.sargan_p = 1.0 - stats::chisq_cdf(res.sargan_j, res.sargan_df);
  }

  // First-stage F: reduced form of dy_{t-1} on the instruments.
  {
    Eigen::VectorXd target = X.col(1);
    Eigen::VectorXd delta = zz.solve(Z.transpose() * target);
    double ssr_full = (target - Z * delta).squaredNorm();
    double mean = target.mean();
    double ssr_restricted = (target.array() - mean).matrix().squaredNorm();
    int q = n_instr - 1;  // excluded instruments
    int df2 = n - n_instr;
    if (q > 0 && df2 > 0 && ssr_full > 0.0)
      res.first_stage_f = ((ssr_restricted - ssr_full) / q) / (ssr_full / df2);
    else
      res.first_stage_f = nan;
  }

  // Arellano-Bond style m1/m2 on differenced residuals at b2, over every
  // row where the regressors exist (not just the instrument-complete set).
  auto m_stat = [&](int lag) -> double {
    std::map<int, std::map<int, double>> resid;  // subject -> round -> u_hat
    for (const auto& r : rows)
      resid[r.subject_key][r.round] = r.dy - b2[0] - b2[1] * r.dy_lag;
    double num = 0.0;
    double denom = 0.0;
    int pairs = 0;
    for (const auto& [s, by_round] : resid) {
      double w = 0.0;
      for (const auto& [t, u] : by_round) {
        auto it = by_round.find(t - lag);
        if (it == by_round.end()) continue;
        w += u * it->second;
        ++pairs;
      }
      num += w;
      denom += w * w;
    }
    if (pairs == 0 || !(denom > 0.0)) return nan;
    return num / std::sqrt(denom);
  };
  res.ar1_stat = m_stat(1);
  res.ar2_stat = m_stat(2);
  return res;
}

}  // namespace mllab
