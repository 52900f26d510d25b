#pragma once

#include "mllab/model.hpp"

namespace mllab {

/// A belief-action pair at which updating stops: the effort is optimal
/// given the belief and the mean surprise is zero. When the zero-surprise
/// belief would exceed 1, the belief is pinned to the top of the support
/// and the boundary flag is set.
struct Equilibrium {
  double phi_limit = 0.0;       // limiting belief about the marker
  double effort_limit = 0.0;    // optimal effort at phi_limit
  bool boundary = false;        // true when pinned at phi = 1
  double gamma_residual = 0.0;  // surprise at phi_limit
  double foc_residual = 0.0;    // |phi*f'(a~,e) - c'(e)| at effort_limit
};

/// Root of the surprise function on (0,1], located by bisection; the
/// sign change is unique under the multiplicative technology. With no
/// sign change on the support (interior fixed point above 1), returns a
/// flagged boundary equilibrium at phi = 1.
Equilibrium solve_equilibrium(const Technology& tech, const AgentProfile& agent,
                              double phi_true);

struct EquilibriumReport {
  bool pass = false;
  bool boundary = false;
  double gamma_residual = 0.0;
  double effort_residual = 0.0;
  double foc_residual = 0.0;
};

/// Recomputes both equilibrium conditions from scratch. A boundary
/// equilibrium passes when its effort is optimal and the recorded
/// residual matches the recomputed surprise at phi = 1.
EquilibriumReport verify_equilibrium(const Equilibrium& eq, const Technology& tech,
                                     const AgentProfile& agent, double phi_true);

}  // namespace mllab
