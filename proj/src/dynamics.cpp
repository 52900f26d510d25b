#include "mllab/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

#include "mllab/rng.hpp"

namespace mllab {

std::vector<TrajectoryRecord> simulate(const AgentProfile& agent,
                                       const Technology& tech, double phi_true,
                                       const BeliefGrid& prior, int rounds,
                                       std::uint64_t seed, SimulationMode mode) {
  agent.validate();
  tech.validate();
  if (rounds < 1) throw std::invalid_argument("simulate: rounds must be >= 1");
  if (!(phi_true > 0.0) || phi_true > 1.0)
    throw std::invalid_argument("simulate: phi_true must lie in (0,1]");

  bool deterministic = (mode == SimulationMode::Deterministic);
  Technology update_tech = tech;
  if (deterministic) update_tech.noise_sigma = 0.0;

  Rng rng(seed);
  BeliefGrid belief = prior;
  std::vector<TrajectoryRecord> path;
  path.reserve(rounds);

  for (int t = 1; t <= rounds; ++t) {
    TrajectoryRecord rec;
    rec.round = t;
    rec.phi_point = belief.mean();
    rec.posterior_variance = belief.variance();
    rec.effort = optimal_effort(tech, agent.believed_ability, rec.phi_point);
    rec.expected_output = expected_output(tech, agent.believed_ability,
                                          rec.phi_point, rec.effort);
    double noise = (deterministic || tech.noise_sigma == 0.0)
                       ? 0.0
                       : rng.normal(0.0, tech.noise_sigma);
    double nu = phi_true * gross_score(tech, agent.true_ability, rec.effort) + noise;
    rec.realized_output = nu - tech.cost(rec.effort);
    rec.surprise_realized = rec.realized_output - rec.expected_output;
    path.push_back(rec);

    if (rec.effort > 0.0)
      belief = bayes_update(belief, update_tech, agent.believed_ability,
                            rec.effort, nu);
  }
  return path;
}

std::vector<TrajectoryPanelRow> monte_carlo(const std::vector<AgentSetup>& population,
                                            const Technology& tech, double phi_true,
                                            int rounds, std::uint64_t seed,
                                            SimulationMode mode) {
  std::vector<TrajectoryPanelRow> panel;
  panel.reserve(population.size() * static_cast<std::size_t>(rounds));
  // Ordered by (agent id, round); simulations are independent given seeds.
  std::vector<const AgentSetup*> ordered;
  ordered.reserve(population.size());
  for (const auto& setup : population) ordered.push_back(&setup);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const AgentSetup* a, const AgentSetup* b) {
                     return a->agent.id < b->agent.id;
                   });
  for (const AgentSetup* setup : ordered) {
    std::uint64_t agent_seed = derive_seed(seed, seed_stream::kAgent,
                                           static_cast<std::uint64_t>(setup->agent.id));
    auto path = simulate(setup->agent, tech, phi_true, setup->prior, rounds,
                         agent_seed, mode);
    for (const auto& rec : path)
      panel.push_back({setup->agent.id, rec});
  }
  return panel;
}

}  // namespace mllab
