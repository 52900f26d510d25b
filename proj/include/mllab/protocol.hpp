#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mllab/belief.hpp"
#include "mllab/model.hpp"
#include "mllab/rng.hpp"

namespace mllab {

/// The experiment's fixed parameters: 5 rounds of 8 questions, a marker
/// that passes half of the correct answers, round and final-test piece
/// rates, and the price cap of the bid auction.
struct ExperimentConfig {
  int rounds = 5;
  int questions_per_round = 8;
  double marker_phi = 0.5;          // proportion of correct answers marked correct
  double piece_rate_round = 0.05;   // USD per mark in a round
  double piece_rate_final = 0.20;   // USD per mark in the bonus test
  double bdm_price_cap = 1.60;      // questions_per_round * piece_rate_final
  double confidence_bonus = 0.10;   // USD for a correct round-1 score guess
  double participation_fee = 1.00;  // USD

  void validate() const;
};

/// One subject-round: the test outcome, the bid, and the belief recovered
/// from it. phi_hat is mark / (bid / piece_rate_final); records where that
/// ratio is undefined or above 1 are flagged and excluded from analysis.
struct RoundRecord {
  int subject_id = 0;
  int round = 0;
  int score = 0;            // correct answers, 0..questions_per_round
  double mark = 0.0;        // score * marker_phi, exact halves kept
  double bid = 0.0;         // [0, bdm_price_cap]
  double implied_score = 0.0;  // bid / piece_rate_final
  double phi_hat = 0.0;     // NaN when undefined
  bool excluded = false;    // phi_hat undefined or > 1
  double effort_seconds = 0.0;
  std::optional<int> stated_score_round1;
};

struct SubjectProfile {
  int id = 0;
  AgentProfile agent;
  bool overconfident = false;  // classified from the round-1 guess
  bool male = false;
  int age = 0;
  bool white = false;
};

struct PanelDataset {
  ExperimentConfig config;
  std::vector<SubjectProfile> subjects;
  std::vector<RoundRecord> records;  // ordered by (subject, round)
};

struct PhiRecovery {
  double implied_score = 0.0;
  double phi_hat = 0.0;  // NaN when undefined
  bool rejected = false;
};

struct BdmOutcome {
  bool won = false;
  double price = 0.0;
};

/// Synthetic population: ability and overconfidence-offset distributions,
/// per-subject prior dispersion, and the demographic mix. Defaults are
/// calibrated so a 189-subject panel matches the target first-round
/// statistics (mean score near 3.93, mean overconfidence near 2.45).
struct PopulationSpec {
  int n_subjects = 189;
  double ability_mean = 3.2;
  double ability_sd = 1.0;
  double ability_min = 0.75;
  double ability_max = 7.5;
  double overconfidence_mean = 3.1;   // offset added to true ability
  double overconfidence_sd = 2.42;
  double believed_ability_min = 0.25;
  double prior_mean_low = 0.35;       // heterogeneous prior locations
  double prior_mean_high = 0.95;
  double prior_sd = 0.065;
  double bid_noise_sd = 0.0;          // truthful bids by default
  double male_share = 101.0 / 189.0;
  double white_share = 96.0 / 189.0;

  void validate() const;
};

/// One experimental round: answer questions, observe the mark, bid, and
/// update the belief from the observed mark. The score is drawn
/// Binomial(questions, f(a,e)/questions); a zero score carries no usable
/// signal and leaves the belief unchanged.
struct RoundOutcome {
  RoundRecord record;
  BeliefGrid belief_after;
};
RoundOutcome run_round(const AgentProfile& agent, const BeliefGrid& belief,
                       const Technology& tech, const ExperimentConfig& config,
                       Rng& rng, double bid_noise_sd = 0.0);

/// Rational bid: the monetary value of the bonus test, where every
/// correct answer is marked correct, so the relevant effort is the one
/// optimal at phi = 1 regardless of the current marker belief.
double optimal_bid(const BeliefGrid& belief, double believed_ability,
                   const Technology& tech, const ExperimentConfig& config);

/// Belief recovery from a (mark, bid) pair; mirrors the exclusion rule
/// for undefined or above-1 values.
PhiRecovery recover_phi(double mark, double bid, const ExperimentConfig& config);

/// Second-price style resolution: a uniform random price on
/// [0, bdm_price_cap]; the subject wins at that price when bid >= price.
BdmOutcome bdm_resolve(double bid, Rng& rng, const ExperimentConfig& config);

/// Overconfident iff the stated round-1 score strictly exceeds the actual
/// one; accurate guessers are grouped with the underconfident.
Confidence classify_confidence(int stated_score_round1, int actual_score_round1,
                               const ExperimentConfig& config);

/// Full synthetic panel, reproducible per seed.
PanelDataset generate_panel(const PopulationSpec& spec,
                            const ExperimentConfig& config, std::uint64_t seed);

}  // namespace mllab
