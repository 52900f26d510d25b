#pragma once

#include <cstdint>
#include <vector>

#include "mllab/belief.hpp"
#include "mllab/model.hpp"

namespace mllab {

enum class SimulationMode { Deterministic, Stochastic };

/// One round of a belief path: the belief snapshot the agent acted on,
/// the action, and what came back.
struct TrajectoryRecord {
  int round = 0;                   // 1-based
  double phi_point = 0.0;          // posterior mean before acting
  double effort = 0.0;
  double expected_output = 0.0;    // phi~ f(a~,e) - c(e)
  double realized_output = 0.0;    // Phi f(a,e) - c(e) + noise
  double surprise_realized = 0.0;  // realized - expected
  double posterior_variance = 0.0; // belief variance before acting
};

/// Round-by-round loop: act on the posterior mean (expected gross output
/// is linear in phi, so the certainty equivalent is exact), observe the
/// gross mark channel nu = Phi f(a,e) + noise, update by Bayes rule.
/// Deterministic mode zeroes the noise draws and uses the exact-inversion
/// update, so the belief lands on the equilibrium after one update.
std::vector<TrajectoryRecord> simulate(const AgentProfile& agent,
                                       const Technology& tech, double phi_true,
                                       const BeliefGrid& prior, int rounds,
                                       std::uint64_t seed, SimulationMode mode);

struct AgentSetup {
  AgentProfile agent;
  BeliefGrid prior;
};

struct TrajectoryPanelRow {
  int agent_id = 0;
  TrajectoryRecord record;
};

/// Independent seeded simulation per agent; rows ordered by
/// (agent id, round). Seeds derive from (master, agent id), so growing
/// the population leaves existing agents' paths untouched.
std::vector<TrajectoryPanelRow> monte_carlo(const std::vector<AgentSetup>& population,
                                            const Technology& tech, double phi_true,
                                            int rounds, std::uint64_t seed,
                                            SimulationMode mode = SimulationMode::Stochastic);

}  // namespace mllab
