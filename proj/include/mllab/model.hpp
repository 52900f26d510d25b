#pragma once

#include <string>

namespace mllab {

enum class Confidence { Overconfident, Underconfident };

/// An agent is a pair of abilities: the true one that produces output and
/// the believed one that drives every decision. The belief is never
/// revised; that gap is what the whole toolkit studies.
struct AgentProfile {
  double true_ability = 1.0;      // a > 0, correct-answer capacity units
  double believed_ability = 1.0;  // a~ > 0, same units
  int id = 0;

  /// Overconfident iff the believed ability strictly exceeds the true
  /// one; exactly-accurate agents are grouped with the underconfident.
  Confidence classification() const {
    return believed_ability > true_ability ? Confidence::Overconfident
                                           : Confidence::Underconfident;
  }

  /// Confidence gap a - a~ (the bound on limiting belief error when >= 0).
  double delta() const { return true_ability - believed_ability; }

  void validate() const;
};

/// Output technology: f(a,e) = a * e^alpha produces correct answers, the
/// marker passes a proportion phi of them, and c(e) = kappa * e^beta is
/// the effort cost. With alpha < 1 < beta the payoff phi*f - c has a
/// unique interior maximizer in effort.
struct Technology {
  double effort_exponent = 0.5;  // alpha in (0,1)
  double cost_exponent = 2.0;    // beta > 1
  double cost_scale = 0.5;       // kappa > 0
  double noise_sigma = 0.35;     // sigma >= 0, output units; 0 = deterministic
  double max_effort = 100.0;     // search bracket, unreachable under defaults

  double output(double ability, double effort) const;  // f(a, e)
  double cost(double effort) const;                    // c(e)
  double output_deriv(double ability, double effort) const;  // df/de
  double cost_deriv(double effort) const;                    // dc/de

  void validate() const;
};

/// Payoff-maximizing effort given believed ability and a point belief
/// about the marker. Closed form (phi*a~*alpha / (kappa*beta))^(1/(beta-alpha)),
/// clamped to [0, max_effort]. phi is clamped into [0,1] at this boundary.
double optimal_effort(const Technology& tech, double believed_ability,
                      double phi_belief);

/// Expected payoff phi*f(a~, e) - c(e) under the agent's beliefs.
double expected_output(const Technology& tech, double believed_ability,
                       double phi_belief, double effort);

/// Realized payoff phi*f(a, e) - c(e) + noise; the caller supplies the
/// noise draw from its own seeded generator.
double realized_output(const Technology& tech, double true_ability,
                       double phi_true, double effort, double noise_draw);

/// Pre-marker correct-answer count f(a, e).
double gross_score(const Technology& tech, double ability, double effort);

/// Mean surprise at the agent's own optimal effort: realized minus
/// expected payoff, cost terms cancelling because the effort is common.
/// Zero surprise is the equilibrium condition; the sign drives the
/// direction of belief revision.
double surprise(const Technology& tech, const AgentProfile& agent,
                double phi_true, double phi_belief);

std::string to_string(Confidence c);

}  // namespace mllab
