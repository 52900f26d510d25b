#include "mllab/equilibrium.hpp"

#include <cmath>
#include <stdexcept>

namespace mllab {

namespace {

constexpr double kGammaTol = 1e-10;
constexpr double kIntervalTol = 1e-12;
constexpr int kMaxIter = 200;
constexpr double kPhiFloor = 1e-12;

double foc_residual_at(const Technology& tech, double believed_ability,
                       double phi, double effort) {
  if (effort <= 0.0) return 0.0;
  return std::fabs(phi * tech.output_deriv(believed_ability, effort) -
                   tech.cost_deriv(effort));
}

}  // namespace

Equilibrium solve_equilibrium(const Technology& tech, const AgentProfile& agent,
                              double phi_true) {
  agent.validate();
  if (!std::isfinite(phi_true) || phi_true <= 0.0 || phi_true > 1.0)
    throw std::invalid_argument("phi_true must lie in (0,1]");

  auto gamma = [&](double phi) { return surprise(tech, agent, phi_true, phi); };

  Equilibrium eq;
  double g_hi = gamma(1.0);
  if (g_hi >= 0.0 && g_hi > kGammaTol) {
    // No sign change on the support: surprise stays positive up to 1.
    eq.phi_limit = 1.0;
    eq.boundary = true;
    eq.gamma_residual = g_hi;
  } else {
    double lo = kPhiFloor;
    double hi = 1.0;
    double mid = hi;
    double g_mid = g_hi;
    for (int i = 0; i < kMaxIter; ++i) {
      mid = 0.5 * (lo + hi);
      g_mid = gamma(mid);
      if (std::fabs(g_mid) < kGammaTol && hi - lo < kIntervalTol) break;
      if (g_mid > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    eq.phi_limit = mid;
    eq.gamma_residual = g_mid;
  }
  eq.effort_limit = optimal_effort(tech, agent.believed_ability, eq.phi_limit);
  eq.foc_residual = foc_residual_at(tech, agent.believed_ability, eq.phi_limit,
                                    eq.effort_limit);
  return eq;
}

EquilibriumReport verify_equilibrium(const Equilibrium& eq, const Technology& tech,
                                     const AgentProfile& agent, double phi_true) {
  EquilibriumReport report;
  report.boundary = eq.boundary;
  report.gamma_residual = surprise(tech, agent, phi_true, eq.phi_limit);
  double e_opt = optimal_effort(tech, agent.believed_ability, eq.phi_limit);
  report.effort_residual = std::fabs(eq.effort_limit - e_opt);
  report.foc_residual = foc_residual_at(tech, agent.believed_ability,
                                        eq.phi_limit, eq.effort_limit);
  bool optimal = report.effort_residual <= 1e-8 * (1.0 + std::fabs(e_opt));
  if (eq.boundary) {
    // Condition 2 is waived at the boundary; the residual must just match
    // the recorded surprise at phi = 1.
    report.pass = optimal && eq.phi_limit == 1.0 &&
                  std::fabs(report.gamma_residual - eq.gamma_residual) <= 1e-8;
  } else {
    report.pass = optimal && std::fabs(report.gamma_residual) <= 1e-8;
  }
  return report;
}

}  // namespace mllab
