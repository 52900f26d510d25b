#include "mllab/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "mllab/errors.hpp"
#include "mllab/stats.hpp"

namespace mllab {

int RegressionResult::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

RegressionResult ols_core(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                          std::vector<std::string> names, bool centered_r2,
                          int df_absorbed) {
  int n = static_cast<int>(X.rows());
  int k = static_cast<int>(X.cols());
  if (n < k + df_absorbed)
    throw SingularDesignError("not enough observations for the design");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < k)
    throw SingularDesignError("design matrix is rank deficient");

  RegressionResult res;
  res.names = std::move(names);
  res.coef = qr.solve(y);
  res.residuals = y - X * res.coef;
  res.n_obs = n;
  res.df_residual = n - k - df_absorbed;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  double ssr = res.residuals.squaredNorm();
  Eigen::MatrixXd xtx_inv =
      (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
  res.p_value.resize(k);
  if (res.df_residual > 0) {
    double sigma2 = ssr / res.df_residual;
    res.vcov = sigma2 * xtx_inv;
    res.se = res.vcov.diagonal().cwiseSqrt();
    res.t_stat = res.coef.array() / res.se.array();
    for (int j = 0; j < k; ++j)
      res.p_value[j] =
          2.0 * (1.0 - stats::student_t_cdf(std::fabs(res.t_stat[j]),
                                            res.df_residual));
  } else {
    // Exact fit: coefficients are defined, inference is not.
    res.vcov = Eigen::MatrixXd::Zero(k, k);
    res.se = Eigen::VectorXd::Zero(k);
    res.t_stat = Eigen::VectorXd::Constant(k, nan);
    res.p_value.setConstant(nan);
  }

  double tss;
  if (centered_r2) {
    double ybar = y.mean();
    tss = (y.array() - ybar).matrix().squaredNorm();
  } else {
    tss = y.squaredNorm();
  }
  res.r_squared = tss > 0.0 ? 1.0 - ssr / tss : 0.0;
  int df_model_n = centered_r2 ? n - 1 : n;
  res.adj_r_squared =
      res.df_residual > 0
          ? 1.0 - (1.0 - res.r_squared) * static_cast<double>(df_model_n) /
                      res.df_residual
          : nan;
  return res;
}

Eigen::MatrixXd gather_columns(const LongPanel& panel,
                               const std::vector<std::string>& x_vars) {
  Eigen::MatrixXd X(panel.rows(), x_vars.size());
  for (std::size_t j = 0; j < x_vars.size(); ++j) X.col(j) = panel.col(x_vars[j]);
  return X;
}

std::vector<bool> complete_rows(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
  std::vector<bool> ok(y.size(), true);
  for (int i = 0; i < y.size(); ++i) {
    if (std::isnan(y[i])) ok[i] = false;
    for (int j = 0; j < X.cols() && ok[i]; ++j)
      if (std::isnan(X(i, j))) ok[i] = false;
  }
  return ok;
}

struct GroupedData {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<int> group;       // consecutive group index per row
  std::vector<int> group_size;  // rows per group
  int dropped_subjects = 0;
};

GroupedData assemble_panel(const LongPanel& panel, const std::string& y_name,
                           const std::vector<std::string>& x_vars,
                           int min_group_size) {
  Eigen::VectorXd y_all = panel.col(y_name);
  Eigen::MatrixXd X_all = gather_columns(panel, x_vars);
  std::vector<bool> ok = complete_rows(y_all, X_all);

  std::map<int, std::vector<int>> by_subject;
  for (int i = 0; i < panel.rows(); ++i)
    if (ok[i]) by_subject[panel.subject[i]].push_back(i);

  GroupedData out;
  std::vector<int> keep_rows;
  int g = 0;
  for (const auto& [sid, rows] : by_subject) {
    if (static_cast<int>(rows.size()) < min_group_size) {
      ++out.dropped_subjects;
      continue;
    }
    for (int r : rows) {
      keep_rows.push_back(r);
      out.group.push_back(g);
    }
    out.group_size.push_back(static_cast<int>(rows.size()));
    ++g;
  }
  out.y.resize(keep_rows.size());
  out.X.resize(keep_rows.size(), X_all.cols());
  for (std::size_t i = 0; i < keep_rows.size(); ++i) {
    out.y[i] = y_all[keep_rows[i]];
    out.X.row(i) = X_all.row(keep_rows[i]);
  }
  return out;
}

}  // namespace

RegressionResult ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                     const std::vector<std::string>& names, bool include_intercept) {
  if (y.size() != X.rows()) throw std::invalid_argument("ols: size mismatch");
  std::vector<bool> ok = complete_rows(y, X);
  int kept = static_cast<int>(std::count(ok.begin(), ok.end(), true));
  Eigen::VectorXd yc(kept);
  Eigen::MatrixXd Xc(kept, X.cols() + (include_intercept ? 1 : 0));
  int r = 0;
  for (int i = 0; i < y.size(); ++i) {
    if (!ok[i]) continue;
    yc[r] = y[i];
    if (include_intercept) {
      Xc(r, 0) = 1.0;
      Xc.row(r).tail(X.cols()) = X.row(i);
    } else {
      Xc.row(r) = X.row(i);
    }
    ++r;
  }
  std::vector<std::string> all_names;
  if (include_intercept) all_names.push_back("(intercept)");
  all_names.insert(all_names.end(), names.begin(), names.end());
  return ols_core(yc, Xc, std::move(all_names), include_intercept, 0);
}

RegressionResult within_fe(const LongPanel& panel, const std::string& y_name,
                           const std::vector<std::string>& x_vars) {
  GroupedData data = assemble_panel(panel, y_name, x_vars, 2);
  int n = static_cast<int>(data.y.size());
  int n_groups = static_cast<int>(data.group_size.size());
  if (n_groups == 0) throw SingularDesignError("no usable subjects for FE");

  // Demean within subject.
  Eigen::VectorXd y_mean = Eigen::VectorXd::Zero(n_groups);
  Eigen::MatrixXd x_mean = Eigen::MatrixXd::Zero(n_groups, data.X.cols());
  for (int i = 0; i < n; ++i) {
    y_mean[data.group[i]] += data.y[i];
    x_mean.row(data.group[i]) += data.X.row(i);
  }
  for (int g = 0; g < n_groups; ++g) {
    y_mean[g] /= data.group_size[g];
    x_mean.row(g) /= data.group_size[g];
  }
  Eigen::VectorXd y_w(n);
  Eigen::MatrixXd X_w(n, data.X.cols());
  for (int i = 0; i < n; ++i) {
    y_w[i] = data.y[i] - y_mean[data.group[i]];
    X_w.row(i) = data.X.row(i) - x_mean.row(data.group[i]);
  }

  // Absorbed columns: no within-subject variation left.
  std::vector<int> live;
  std::vector<std::string> live_names, dropped;
  for (int j = 0; j < X_w.cols(); ++j) {
    double scale = std::max(1.0, data.X.col(j).cwiseAbs().maxCoeff());
    if (X_w.col(j).cwiseAbs().maxCoeff() <= 1e-9 * scale) {
      dropped.push_back(x_vars[j]);
    } else {
      live.push_back(j);
      live_names.push_back(x_vars[j]);
    }
  }
  if (live.empty()) throw SingularDesignError("every FE regressor is absorbed");
  Eigen::MatrixXd X_live(n, live.size());
  for (std::size_t j = 0; j < live.size(); ++j) X_live.col(j) = X_w.col(live[j]);

  RegressionResult res =
      ols_core(y_w, X_live, std::move(live_names), true, n_groups);
  res.dropped_subjects = data.dropped_subjects;
  res.dropped_terms = std::move(dropped);
  return res;
}

RegressionResult random_effects(const LongPanel& panel, const std::string& y_name,
                                const std::vector<std::string>& x_vars) {
  GroupedData data = assemble_panel(panel, y_name, x_vars, 1);
  int n = static_cast<int>(data.y.size());
  int n_groups = static_cast<int>(data.group_size.size());
  int k = static_cast<int>(data.X.cols());
  if (n_groups <= k + 1)
    throw SingularDesignError("too few subjects for variance components");

  // Group means.
  Eigen::VectorXd y_mean = Eigen::VectorXd::Zero(n_groups);
  Eigen::MatrixXd x_mean = Eigen::MatrixXd::Zero(n_groups, k);
  for (int i = 0; i < n; ++i) {
    y_mean[data.group[i]] += data.y[i];
    x_mean.row(data.group[i]) += data.X.row(i);
  }
  for (int g = 0; g < n_groups; ++g) {
    y_mean[g] /= data.group_size[g];
    x_mean.row(g) /= data.group_size[g];
  }

  // Within residual variance (sigma_e^2), via the demeaned regression on
  // the columns that vary within subject.
  Eigen::VectorXd y_w(n);
  Eigen::MatrixXd X_w(n, k);
  for (int i = 0; i < n; ++i) {
    y_w[i] = data.y[i] - y_mean[data.group[i]];
    X_w.row(i) = data.X.row(i) - x_mean.row(data.group[i]);
  }
  std::vector<int> live;
  for (int j = 0; j < k; ++j) {
    double scale = std::max(1.0, data.X.col(j).cwiseAbs().maxCoeff());
    if (X_w.col(j).cwiseAbs().maxCoeff() > 1e-9 * scale) live.push_back(j);
  }
  double sigma2_e;
  int k_w = static_cast<int>(live.size());
  {
    Eigen::MatrixXd X_live(n, k_w);
    for (int j = 0; j < k_w; ++j) X_live.col(j) = X_w.col(live[j]);
    Eigen::VectorXd beta_w =
        X_live.colPivHouseholderQr().solve(y_w);
    double ssr_w = (y_w - X_live * beta_w).squaredNorm();
    int df_w = n - n_groups - k_w;
    if (df_w <= 0) throw SingularDesignError("no within degrees of freedom");
    sigma2_e = ssr_w / df_w;
    if (!(sigma2_e > 0.0))
      throw SingularDesignError("outcome has no residual within-subject variation");
  }

  // Between regression on group means (with intercept).
  double sigma2_u = 0.0;
  bool floored = false;
  {
    Eigen::MatrixXd Xb(n_groups, k + 1);
    Xb.col(0).setOnes();
    Xb.rightCols(k) = x_mean;
    Eigen::VectorXd beta_b = Xb.colPivHouseholderQr().solve(y_mean);
    double ssr_b = (y_mean - Xb * beta_b).squaredNorm();
    int df_b = n_groups - k - 1;
    if (df_b <= 0) throw SingularDesignError("no between degrees of freedom");
    double harmonic = 0.0;
    for (int g = 0; g < n_groups; ++g) harmonic += 1.0 / data.group_size[g];
    double t_h = n_groups / harmonic;
    sigma2_u = ssr_b / df_b - sigma2_e / t_h;
    if (sigma2_u < 0.0) {
      sigma2_u = 0.0;
      floored = true;
    }
  }

  // Quasi-demeaning weights per subject.
  RegressionResult res;
  res.theta_min = 1.0;
  res.theta_max = 0.0;
  Eigen::VectorXd y_q(n);
  Eigen::MatrixXd X_q(n, k + 1);
  for (int i = 0; i < n; ++i) {
    int g = data.group[i];
    double theta =
        1.0 - std::sqrt(sigma2_e / (data.group_size[g] * sigma2_u + sigma2_e));
    res.theta_min = std::min(res.theta_min, theta);
    res.theta_max = std::max(res.theta_max, theta);
    y_q[i] = data.y[i] - theta * y_mean[g];
    X_q(i, 0) = 1.0 - theta;
    X_q.row(i).tail(k) = data.X.row(i) - theta * x_mean.row(g);
  }
  std::vector<std::string> names;
  names.push_back("(intercept)");
  names.insert(names.end(), x_vars.begin(), x_vars.end());
  RegressionResult gls = ols_core(y_q, X_q, std::move(names), true, 0);
  gls.variance_floored = floored;
  gls.dropped_subjects = data.dropped_subjects;
  gls.theta_min = res.theta_min;
  gls.theta_max = res.theta_max;
  return gls;
}

HausmanResult hausman(const RegressionResult& fe, const RegressionResult& re) {
  std::vector<int> fe_idx, re_idx;
  for (std::size_t i = 0; i < fe.names.size(); ++i) {
    int j = re.index_of(fe.names[i]);
    if (j >= 0) {
      fe_idx.push_back(static_cast<int>(i));
      re_idx.push_back(j);
    }
  }
  int k = static_cast<int>(fe_idx.size());
  if (k == 0) throw std::invalid_argument("hausman: no common coefficients");

  Eigen::VectorXd d(k);
  Eigen::MatrixXd V(k, k);
  for (int i = 0; i < k; ++i) {
    d[i] = fe.coef[fe_idx[i]] - re.coef[re_idx[i]];
    for (int j = 0; j < k; ++j)
      V(i, j) = fe.vcov(fe_idx[i], fe_idx[j]) - re.vcov(re_idx[i], re_idx[j]);
  }

  HausmanResult out;
  out.df = k;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (V + V.transpose()));
  double max_ev = es.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd inv_ev = es.eigenvalues();
  for (int i = 0; i < k; ++i) {
    if (inv_ev[i] <= 1e-12 * std::max(1.0, max_ev)) {
      inv_ev[i] = 0.0;
      out.pseudo_inverse = true;
    } else {
      inv_ev[i] = 1.0 / inv_ev[i];
    }
  }
  Eigen::MatrixXd V_pinv =
      es.eigenvectors() * inv_ev.asDiagonal() * es.eigenvectors().transpose();
  out.statistic = std::max(0.0, d.dot(V_pinv * d));
  out.p_value = 1.0 - stats::chisq_cdf(out.statistic, out.df);
  return out;
}

TTestResult paired_t_one_sided(const std::vector<double>& before,
                               const std::vector<double>& after,
                               Alternative alternative) {
  if (before.size() != after.size())
    throw std::invalid_argument("paired_t: length mismatch");
  std::vector<double> d;
  d.reserve(before.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    double v = after[i] - before[i];
    if (!std::isnan(v)) d.push_back(v);
  }
  int n = static_cast<int>(d.size());
  if (n < 2) throw std::invalid_argument("paired_t: need at least two pairs");

  double mean = std::accumulate(d.begin(), d.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / (n - 1));
  if (!(sd > 0.0))
    throw DegenerateTestError("paired differences have zero variance");

  TTestResult res;
  res.mean_difference = mean;
  res.df = n - 1;
  res.t_stat = mean / (sd / std::sqrt(static_cast<double>(n)));
  double cdf = stats::student_t_cdf(res.t_stat, res.df);
  res.p_value = alternative == Alternative::Less ? cdf : 1.0 - cdf;
  return res;
}

Eigen::VectorXd variance_target(const LongPanel& panel, const std::string& phi_col,
                                VarianceMode mode, double phi_true) {
  const Eigen::VectorXd& phi = panel.col(phi_col);
  int n = panel.rows();
  Eigen::VectorXd out(n);

  if (mode == VarianceMode::SqDevFromTruth) {
    for (int i = 0; i < n; ++i) {
      double d = phi[i] - phi_true;
      out[i] = d * d;
    }
    return out;
  }

  std::map<int, std::pair<double, int>> acc;  // round -> (sum, count)
  for (int i = 0; i < n; ++i) {
    if (std::isnan(phi[i])) continue;
    auto& [sum, count] = acc[panel.round[i]];
    sum += phi[i];
    count += 1;
  }
  for (int i = 0; i < n; ++i) {
    if (std::isnan(phi[i])) {
      out[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const auto& [sum, count] = acc.at(panel.round[i]);
    double d = phi[i] - sum / count;
    out[i] = mode == VarianceMode::SqDevFromRoundMean ? d * d : std::fabs(d);
  }
  return out;
}

}  // namespace mllab
