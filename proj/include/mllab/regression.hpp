#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mllab/panel.hpp"

namespace mllab {

struct RegressionResult {
  std::vector<std::string> names;
  Eigen::VectorXd coef;
  Eigen::VectorXd se;
  Eigen::VectorXd t_stat;
  Eigen::VectorXd p_value;  // two-sided
  Eigen::MatrixXd vcov;
  Eigen::VectorXd residuals;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  int n_obs = 0;
  int df_residual = 0;
  // Panel bookkeeping
  int dropped_subjects = 0;                 // FE: singleton groups removed
  std::vector<std::string> dropped_terms;   // FE: absorbed (within-constant) columns
  bool variance_floored = false;            // RE: negative variance component hit 0
  double theta_min = 0.0, theta_max = 0.0;  // RE: quasi-demeaning weights range

  int index_of(const std::string& name) const;
};

/// OLS via column-pivoted QR with classical standard errors. Throws
/// SingularDesignError when the design (including the intercept, if
/// requested) is rank deficient.
RegressionResult ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                     const std::vector<std::string>& names, bool include_intercept);

/// Within (fixed-effects) estimator: subject-demeaned OLS. Subjects with a
/// single usable observation are dropped and counted; regressors that are
/// constant within every subject are absorbed and reported as dropped.
RegressionResult within_fe(const LongPanel& panel, const std::string& y,
                           const std::vector<std::string>& x_vars);

/// Random-effects (Swamy-Arora) feasible GLS with quasi-demeaning weights
/// computed per subject; negative variance components are floored at zero
/// and flagged.
RegressionResult random_effects(const LongPanel& panel, const std::string& y,
                                const std::vector<std::string>& x_vars);

struct HausmanResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  bool pseudo_inverse = false;  // covariance difference was not positive definite
};

/// Hausman specification test over the coefficients common to both fits
/// (the intercept, absent from FE, is skipped automatically).
HausmanResult hausman(const RegressionResult& fe, const RegressionResult& re);

enum class Alternative { Less, Greater };

struct TTestResult {
  double mean_difference = 0.0;
  double t_stat = 0.0;
  int df = 0;
  double p_value = 0.0;  // one-sided
};

/// Paired one-sided t test on after - before. Throws DegenerateTestError
/// when the differences have zero variance.
TTestResult paired_t_one_sided(const std::vector<double>& before,
                               const std::vector<double>& after,
                               Alternative alternative);

enum class VarianceMode { SqDevFromRoundMean, AbsDevFromRoundMean, SqDevFromTruth };

/// Derived dispersion column for the prediction-2 analyses: squared or
/// absolute deviation from the within-round cross-subject mean, or squared
/// deviation from the true marker value. NaN inputs propagate and are
/// ignored by the round means.
Eigen::VectorXd variance_target(const LongPanel& panel, const std::string& phi_col,
                                VarianceMode mode, double phi_true = 0.0);

}  // namespace mllab
