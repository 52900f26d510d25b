#pragma once

#include <set>
#include <string>
#include <vector>

#include "mllab/panel.hpp"

namespace mllab {

enum class GmmInstrument { LagEffort, Lag2Dep };

struct GmmResult {
  double beta = 0.0;       // drift of the differenced equation (per-round effect)
  double gamma = 0.0;      // coefficient on the lagged dependent variable
  double beta_se = 0.0;
  double gamma_se = 0.0;
  bool sargan_applicable = false;  // overidentified specs only
  double sargan_j = 0.0;
  int sargan_df = 0;
  double sargan_p = 1.0;
  double first_stage_f = 0.0;
  double ar1_stat = 0.0;  // m1 on differenced residuals
  double ar2_stat = 0.0;  // m2; NaN when no lag-2 pairs exist
  std::vector<std::string> instrument_names;
  int n_obs = 0;        // estimation rows (instrument-complete)
  int n_subjects = 0;
};

/// First-difference GMM for y_it = alpha_i + beta*Round + gamma*y_{i,t-1} + u_it.
/// Differencing removes the subject effect and turns the round term into a
/// constant, so the estimated equation is dy_t = beta + gamma*dy_{t-1} + du_t,
/// with dy_{t-1} instrumented by lagged effort differences and/or the
/// twice-lagged dependent difference. Two-step linear GMM: 2SLS first, then
/// the optimal weight built from subject-clustered first-step residuals.
/// Diagnostics: Sargan/Hansen J (overidentified specs), the first-stage F
/// from the reduced form of dy_{t-1} on the instruments, and the m1/m2
/// serial-correlation statistics computed on differenced residuals over
/// every row where the regressors exist.
GmmResult diff_gmm(const LongPanel& panel, const std::string& dep,
                   const std::set<GmmInstrument>& instruments,
                   const std::string& effort_col = "effort_seconds");

}  // namespace mllab
