#include "mllab/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mllab {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v))
    throw std::invalid_argument(std::string(name) + " must be finite");
}

double clamp_phi(double phi) { return std::clamp(phi, 0.0, 1.0); }

}  // namespace

void AgentProfile::validate() const {
  require_finite(true_ability, "true_ability");
  require_finite(believed_ability, "believed_ability");
  if (true_ability <= 0.0 || believed_ability <= 0.0)
    throw std::invalid_argument("abilities must be strictly positive");
}

double Technology::output(double ability, double effort) const {
  return ability * std::pow(effort, effort_exponent);
}

double Technology::cost(double effort) const {
  return cost_scale * std::pow(effort, cost_exponent);
}

double Technology::output_deriv(double ability, double effort) const {
  return ability * effort_exponent * std::pow(effort, effort_exponent - 1.0);
}

double Technology::cost_deriv(double effort) const {
  return cost_scale * cost_exponent * std::pow(effort, cost_exponent - 1.0);
}

void Technology::validate() const {
  require_finite(effort_exponent, "effort_exponent");
  require_finite(cost_exponent, "cost_exponent");
  require_finite(cost_scale, "cost_scale");
  require_finite(noise_sigma, "noise_sigma");
  require_finite(max_effort, "max_effort");
  if (effort_exponent <= 0.0 || effort_exponent >= 1.0)
    throw std::invalid_argument("effort_exponent must lie in (0,1)");
  if (cost_exponent <= 1.0)
    throw std::invalid_argument("cost_exponent must exceed 1");
  if (cost_scale <= 0.0) throw std::invalid_argument("cost_scale must be positive");
  if (noise_sigma < 0.0) throw std::invalid_argument("noise_sigma must be nonnegative");
  if (max_effort <= 0.0) throw std::invalid_argument("max_effort must be positive");
}

double optimal_effort(const Technology& tech, double believed_ability,
                      double phi_belief) {
  require_finite(believed_ability, "believed_ability");
  require_finite(phi_belief, "phi_belief");
  if (believed_ability <= 0.0)
    throw std::invalid_argument("believed_ability must be positive");
  double phi = clamp_phi(phi_belief);
  if (phi == 0.0) return 0.0;
  double base = phi * believed_ability * tech.effort_exponent /
                (tech.cost_scale * tech.cost_exponent);
  double e = std::pow(base, 1.0 / (tech.cost_exponent - tech.effort_exponent));
  return std::min(e, tech.max_effort);
}

double expected_output(const Technology& tech, double believed_ability,
                       double phi_belief, double effort) {
  require_finite(effort, "effort");
  if (effort < 0.0) throw std::invalid_argument("effort must be nonnegative");
  if (effort == 0.0) return 0.0;
  double phi = clamp_phi(phi_belief);
  return phi * tech.output(believed_ability, effort) - tech.cost(effort);
}

double realized_output(const Technology& tech, double true_ability,
                       double phi_true, double effort, double noise_draw) {
  if (effort < 0.0) throw std::invalid_argument("effort must be nonnegative");
  if (effort == 0.0) return noise_draw;
  return clamp_phi(phi_true) * tech.output(true_ability, effort) -
         tech.cost(effort) + noise_draw;
}

double gross_score(const Technology& tech, double ability, double effort) {
  if (effort <= 0.0) return 0.0;
  return tech.output(ability, effort);
}

double surprise(const Technology& tech, const AgentProfile& agent,
                double phi_true, double phi_belief) {
  double e = optimal_effort(tech, agent.believed_ability, phi_belief);
  if (e == 0.0) return 0.0;
  double phi = clamp_phi(phi_true);
  double phib = clamp_phi(phi_belief);
  return phi * tech.output(agent.true_ability, e) -
         phib * tech.output(agent.believed_ability, e);
}

std::string to_string(Confidence c) {
  return c == Confidence::Overconfident ? "overconfident" : "underconfident";
}

}  // namespace mllab
