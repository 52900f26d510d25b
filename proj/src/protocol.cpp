#include "mllab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mllab/errors.hpp"

namespace mllab {

namespace {

constexpr double kSecondsPerEffort = 60.0;
constexpr double kTimingNoiseSd = 10.0;
constexpr double kMinSeconds = 5.0;

int draw_age(Rng& rng) {
  // Bracket shares of the recruited sample: <21, 21-35, 36-50, >50.
  double u = rng.uniform();
  if (u < 2.0 / 189.0) return static_cast<int>(rng.uniform(18.0, 21.0));
  if (u < (2.0 + 145.0) / 189.0) return static_cast<int>(rng.uniform(21.0, 36.0));
  if (u < (2.0 + 145.0 + 29.0) / 189.0) return static_cast<int>(rng.uniform(36.0, 51.0));
  return static_cast<int>(rng.uniform(51.0, 71.0));
}

}  // namespace

void ExperimentConfig::validate() const {
  if (rounds < 1) throw ConfigError("rounds must be >= 1");
  if (questions_per_round < 1) throw ConfigError("questions_per_round must be >= 1");
  if (!(marker_phi > 0.0) || marker_phi > 1.0)
    throw ConfigError("marker_phi must lie in (0,1]");
  for (double v : {piece_rate_round, piece_rate_final, bdm_price_cap,
                   confidence_bonus, participation_fee})
    if (v < 0.0 || !std::isfinite(v))
      throw ConfigError("monetary values must be nonnegative");
  double cap = questions_per_round * piece_rate_final;
  if (std::fabs(bdm_price_cap - cap) > 1e-9)
    throw ConfigError("bdm_price_cap must equal questions_per_round * piece_rate_final");
}

void PopulationSpec::validate() const {
  if (n_subjects < 0) throw ConfigError("n_subjects must be nonnegative");
  if (!(ability_sd >= 0.0) || !(ability_mean > 0.0))
    throw ConfigError("ability distribution invalid");
  if (!(ability_min > 0.0) || ability_max < ability_min)
    throw ConfigError("ability truncation range invalid");
  if (!(overconfidence_sd >= 0.0)) throw ConfigError("overconfidence_sd invalid");
  if (!(believed_ability_min > 0.0)) throw ConfigError("believed_ability_min invalid");
  if (!(prior_sd > 0.0)) throw ConfigError("prior_sd must be positive");
  if (prior_mean_low > prior_mean_high)
    throw ConfigError("prior mean range inverted");
  if (bid_noise_sd < 0.0) throw ConfigError("bid_noise_sd must be nonnegative");
  if (male_share < 0.0 || male_share > 1.0 || white_share < 0.0 || white_share > 1.0)
    throw ConfigError("demographic shares must lie in [0,1]");
}

RoundOutcome run_round(const AgentProfile& agent, const BeliefGrid& belief,
                       const Technology& tech, const ExperimentConfig& config,
                       Rng& rng, double bid_noise_sd) {
  RoundRecord rec;
  double phi_point = belief.mean();
  double effort = optimal_effort(tech, agent.believed_ability, phi_point);
  double capacity = gross_score(tech, agent.true_ability, effort);
  double p = std::clamp(capacity / config.questions_per_round, 0.0, 1.0);

  rec.score = rng.binomial(config.questions_per_round, p);
  rec.mark = rec.score * config.marker_phi;

  double bid = optimal_bid(belief, agent.believed_ability, tech, config);
  if (bid_noise_sd > 0.0)
    bid = std::clamp(bid + rng.normal(0.0, bid_noise_sd), 0.0, config.bdm_price_cap);
  rec.bid = bid;

  PhiRecovery rec_phi = recover_phi(rec.mark, rec.bid, config);
  rec.implied_score = rec_phi.implied_score;
  rec.phi_hat = rec_phi.phi_hat;
  rec.excluded = rec_phi.rejected;

  rec.effort_seconds = std::max(
      kMinSeconds, kSecondsPerEffort * effort + rng.normal(0.0, kTimingNoiseSd));

  // The subject sees only the mark; a zero mark identifies nothing on the
  // multiplicative channel and is skipped. The update uses the mark
  // channel's own dispersion (binomial sd at the design midpoint), which
  // is what a subject who knows the noise scale of what they observe
  // would plug into the likelihood.
  if (rec.score > 0 && effort > 0.0) {
    Technology channel = tech;
    channel.noise_sigma = config.marker_phi *
                          std::sqrt(static_cast<double>(config.questions_per_round)) /
                          2.0;
    BeliefGrid updated =
        bayes_update(belief, channel, agent.believed_ability, effort, rec.mark);
    return {rec, std::move(updated)};
  }
  return {rec, belief};
}

double optimal_bid(const BeliefGrid& belief, double believed_ability,
                   const Technology& tech, const ExperimentConfig& config) {
  (void)belief;  // the bonus test's marker is known, so the bid is belief-free
  double effort_final = optimal_effort(tech, believed_ability, 1.0);
  double expected_correct =
      std::min(gross_score(tech, believed_ability, effort_final),
               static_cast<double>(config.questions_per_round));
  return std::clamp(config.piece_rate_final * expected_correct, 0.0,
                    config.bdm_price_cap);
}

PhiRecovery recover_phi(double mark, double bid, const ExperimentConfig& config) {
  if (bid < 0.0 || !std::isfinite(bid))
    throw std::invalid_argument("recover_phi: bid must be nonnegative");
  PhiRecovery out;
  out.implied_score = bid / config.piece_rate_final;
  if (out.implied_score <= 0.0) {
    out.phi_hat = std::numeric_limits<double>::quiet_NaN();
    out.rejected = true;  // undefined ratio; not a fault
    return out;
  }
  out.phi_hat = mark / out.implied_score;
  out.rejected = !(out.phi_hat >= 0.0 && out.phi_hat <= 1.0);
  return out;
}

BdmOutcome bdm_resolve(double bid, Rng& rng, const ExperimentConfig& config) {
  if (bid < 0.0 || bid > config.bdm_price_cap)
    throw std::invalid_argument("bdm_resolve: bid outside [0, cap]");
  BdmOutcome out;
  out.price = rng.uniform(0.0, config.bdm_price_cap);
  out.won = bid >= out.price;
  return out;
}

Confidence classify_confidence(int stated_score_round1, int actual_score_round1,
                               const ExperimentConfig& config) {
  if (stated_score_round1 < 0 || stated_score_round1 > config.questions_per_round ||
      actual_score_round1 < 0 || actual_score_round1 > config.questions_per_round)
    throw std::invalid_argument("classify_confidence: scores outside 0..questions");
  return stated_score_round1 > actual_score_round1 ? Confidence::Overconfident
                                                   : Confidence::Underconfident;
}

PanelDataset generate_panel(const PopulationSpec& spec,
                            const ExperimentConfig& config, std::uint64_t seed) {
  spec.validate();
  config.validate();

  Technology tech;  // default technology; sigma as calibrated
  PanelDataset panel;
  panel.config = config;
  panel.subjects.reserve(spec.n_subjects);
  panel.records.reserve(static_cast<std::size_t>(spec.n_subjects) * config.rounds);

  for (int i = 0; i < spec.n_subjects; ++i) {
    Rng rng(derive_seed(seed, seed_stream::kSubject, static_cast<std::uint64_t>(i)));

    SubjectProfile subject;
    subject.id = i + 1;
    double a = spec.ability_sd > 0.0
                   ? rng.truncated_normal(spec.ability_mean, spec.ability_sd,
                                          spec.ability_min, spec.ability_max)
                   : spec.ability_mean;
    double offset = spec.overconfidence_sd > 0.0
                        ? rng.normal(spec.overconfidence_mean, spec.overconfidence_sd)
                        : spec.overconfidence_mean;
    subject.agent.id = subject.id;
    subject.agent.true_ability = a;
    subject.agent.believed_ability = std::max(spec.believed_ability_min, a + offset);
    subject.male = rng.bernoulli(spec.male_share);
    subject.white = rng.bernoulli(spec.white_share);
    subject.age = draw_age(rng);

    double prior_mean = rng.uniform(spec.prior_mean_low, spec.prior_mean_high);
    BeliefGrid belief = BeliefGrid::truncated_normal(prior_mean, spec.prior_sd);

    for (int t = 1; t <= config.rounds; ++t) {
      RoundOutcome outcome =
          run_round(subject.agent, belief, tech, config, rng, spec.bid_noise_sd);
      outcome.record.subject_id = subject.id;
      outcome.record.round = t;
      if (t == 1) {
        // The round-1 guess comes from the believed production function.
        double believed_score =
            gross_score(tech, subject.agent.believed_ability,
                        optimal_effort(tech, subject.agent.believed_ability,
                                       belief.mean()));
        int stated = static_cast<int>(std::lround(
            std::clamp(believed_score, 0.0,
                       static_cast<double>(config.questions_per_round))));
        outcome.record.stated_score_round1 = stated;
        subject.overconfident =
            classify_confidence(stated, outcome.record.score, config) ==
            Confidence::Overconfident;
      }
      belief = outcome.belief_after;
      panel.records.push_back(outcome.record);
    }
    panel.subjects.push_back(subject);
  }
  return panel;
}

}  // namespace mllab
