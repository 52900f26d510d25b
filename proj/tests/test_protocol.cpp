#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "mllab/csv.hpp"
#include "mllab/errors.hpp"
#include "mllab/protocol.hpp"

using namespace mllab;

namespace {

Technology tech() { return Technology{}; }

BeliefGrid point_mass_at(double phi) {
  BeliefGrid base = BeliefGrid::uniform();
  std::vector<double> mass(base.points(), 0.0);
  int idx = static_cast<int>(std::lround(phi * base.points())) - 1;
  mass[idx] = 1.0;
  return BeliefGrid(base.support(), std::move(mass));
}

}  // namespace

TEST_CASE("experiment config invariants") {
  ExperimentConfig config;
  CHECK_NOTHROW(config.validate());
  CHECK(config.bdm_price_cap ==
        doctest::Approx(config.questions_per_round * config.piece_rate_final));
  config.bdm_price_cap = 1.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("run_round: degenerate binomial ends") {
  ExperimentConfig config;
  Rng rng(1);

  AgentProfile hercules{500.0, 500.0, 1};
  RoundOutcome top = run_round(hercules, point_mass_at(0.5), tech(), config, rng);
  CHECK(top.record.score == 8);
  CHECK(top.record.mark == doctest::Approx(4.0));

  AgentProfile mouse{1e-6, 5.0, 2};
  RoundOutcome bottom = run_round(mouse, point_mass_at(0.5), tech(), config, rng);
  CHECK(bottom.record.score == 0);
  CHECK(bottom.record.mark == 0.0);
  // Nothing to learn from a zero mark: belief is unchanged.
  for (int k = 0; k < 200; ++k)
    CHECK(bottom.belief_after.mass()[k] ==
          doctest::Approx(point_mass_at(0.5).mass()[k]));
}

TEST_CASE("run_round: score centers on the production function") {
  // Belief pinned at 0.4 makes optimal effort exactly 1, so f(5,1) = 5 and
  // the binomial score has mean 5, mark mean 2.5.
  ExperimentConfig config;
  AgentProfile agent{5.0, 5.0, 1};
  BeliefGrid belief = point_mass_at(0.4);
  CHECK(optimal_effort(tech(), 5.0, belief.mean()) == doctest::Approx(1.0));
  Rng rng(77);
  int draws = 100000;
  double sum_score = 0.0, sum_mark = 0.0;
  for (int i = 0; i < draws; ++i) {
    RoundOutcome out = run_round(agent, belief, tech(), config, rng);
    sum_score += out.record.score;
    sum_mark += out.record.mark;
  }
  double se = std::sqrt(8 * 0.625 * 0.375 / draws);
  CHECK(std::fabs(sum_score / draws - 5.0) < 3.0 * se);
  CHECK(std::fabs(sum_mark / draws - 2.5) < 1.5 * se);
}

TEST_CASE("optimal_bid: cap, linear pricing, and the worked default") {
  ExperimentConfig config;
  BeliefGrid any = BeliefGrid::uniform();

  // Final-test capacity above 8 answers bids the cap.
  CHECK(optimal_bid(any, 6.0, tech(), config) == doctest::Approx(1.60));

  // kappa tuned so the final-test capacity is exactly 5 answers.
  Technology five = tech();
  five.cost_scale = 1.25;
  CHECK(optimal_effort(five, 5.0, 1.0) == doctest::Approx(1.0));
  CHECK(optimal_bid(any, 5.0, five, config) == doctest::Approx(1.00));

  double e_final = optimal_effort(tech(), 5.0, 1.0);
  CHECK(e_final == doctest::Approx(1.84202).epsilon(1e-5));
  CHECK(optimal_bid(any, 5.0, tech(), config) ==
        doctest::Approx(0.2 * 5.0 * std::sqrt(e_final)).epsilon(1e-9));
  CHECK(optimal_bid(any, 5.0, tech(), config) == doctest::Approx(1.35721).epsilon(1e-4));
}

TEST_CASE("recover_phi: formula, retention, and rejection") {
  ExperimentConfig config;
  PhiRecovery a = recover_phi(2.0, 1.00, config);
  CHECK(a.implied_score == doctest::Approx(5.0));
  CHECK(a.phi_hat == doctest::Approx(0.40));
  CHECK(!a.rejected);

  PhiRecovery zero = recover_phi(0.0, 0.60, config);
  CHECK(zero.phi_hat == doctest::Approx(0.0));
  CHECK(!zero.rejected);

  PhiRecovery b = recover_phi(2.5, 0.80, config);
  CHECK(b.implied_score == doctest::Approx(4.0));
  CHECK(b.phi_hat == doctest::Approx(0.625));

  PhiRecovery undefined = recover_phi(2.0, 0.0, config);
  CHECK(undefined.rejected);

  PhiRecovery above_one = recover_phi(4.0, 0.40, config);
  CHECK(above_one.rejected);
  CHECK_THROWS_AS(recover_phi(1.0, -0.5, config), std::invalid_argument);
}

TEST_CASE("bdm_resolve: boundary bids and the fair-coin midpoint") {
  ExperimentConfig config;
  Rng rng(5);
  for (int i = 0; i < 200; ++i) CHECK(bdm_resolve(1.60, rng, config).won);
  for (int i = 0; i < 200; ++i) CHECK(!bdm_resolve(0.0, rng, config).won);
  int wins = 0;
  int draws = 100000;
  for (int i = 0; i < draws; ++i)
    if (bdm_resolve(0.80, rng, config).won) ++wins;
  double se = std::sqrt(0.25 / draws);
  CHECK(std::fabs(static_cast<double>(wins) / draws - 0.5) < 3.0 * se);
  CHECK_THROWS_AS(bdm_resolve(2.0, rng, config), std::invalid_argument);
}

TEST_CASE("bdm truthfulness: the truthful bid maximizes expected payoff") {
  ExperimentConfig config;
  Rng rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    double believed = rng.uniform(0.5, 9.0);
    double truthful = optimal_bid(BeliefGrid::uniform(), believed, tech(), config);
    // Expected payoff of bidding b with value v: integral over the price
    // draw of (v - p)/cap on [0, b].
    double v = truthful;
    double best_bid = 0.0, best_payoff = -1e300;
    for (int g = 0; g <= 160; ++g) {
      double b = 0.01 * g;
      double payoff = (v * b - 0.5 * b * b) / config.bdm_price_cap;
      if (payoff > best_payoff) {
        best_payoff = payoff;
        best_bid = b;
      }
    }
    CHECK(std::fabs(best_bid - truthful) <= 0.01 + 1e-12);
  }
}

TEST_CASE("classification from the round-1 guess") {
  ExperimentConfig config;
  CHECK(classify_confidence(6, 4, config) == Confidence::Overconfident);
  CHECK(classify_confidence(4, 4, config) == Confidence::Underconfident);
  CHECK(classify_confidence(3, 5, config) == Confidence::Underconfident);
  CHECK_THROWS_AS(classify_confidence(9, 4, config), std::invalid_argument);
}

TEST_CASE("recovery round trip at matched effort, and the bid-channel bias") {
  ExperimentConfig config;
  Technology t = tech();

  // Identity: dividing the expected mark by believed marks at the same
  // effort returns marker_phi exactly for an accurate agent.
  for (double e : {0.5, 1.0, 1.7}) {
    double mark = config.marker_phi * gross_score(t, 5.0, e);
    double bid = config.piece_rate_final * gross_score(t, 5.0, e);
    PhiRecovery rec = recover_phi(mark, bid, config);
    CHECK(rec.phi_hat == doctest::Approx(config.marker_phi).epsilon(1e-12));
    CHECK(!rec.rejected);
  }

  // With the rational bid (final-test effort at phi = 1), the recovered
  // value is biased down by (e_round/e_final)^alpha; the exclusion logic
  // never drops these in-range records.
  double phi_point = 0.5;
  double e_round = optimal_effort(t, 5.0, phi_point);
  double e_final = optimal_effort(t, 5.0, 1.0);
  double mark = config.marker_phi * gross_score(t, 5.0, e_round);
  double bid = optimal_bid(BeliefGrid::uniform(), 5.0, t, config);
  PhiRecovery rec = recover_phi(mark, bid, config);
  double expected =
      config.marker_phi * std::pow(e_round / e_final, t.effort_exponent);
  CHECK(rec.phi_hat == doctest::Approx(expected).epsilon(1e-9));
  CHECK(rec.phi_hat < config.marker_phi);
  CHECK(!rec.rejected);
}

TEST_CASE("generate_panel: reproducible bytes, unique contiguous rounds") {
  PopulationSpec spec;
  spec.n_subjects = 25;
  ExperimentConfig config;
  PanelDataset a = generate_panel(spec, config, 31337);
  PanelDataset b = generate_panel(spec, config, 31337);
  std::ostringstream csv_a, csv_b;
  write_panel_csv(a, csv_a);
  write_panel_csv(b, csv_b);
  CHECK(csv_a.str() == csv_b.str());

  PanelDataset c = generate_panel(spec, config, 31338);
  std::ostringstream csv_c;
  write_panel_csv(c, csv_c);
  CHECK(csv_a.str() != csv_c.str());

  std::set<std::pair<int, int>> keys;
  std::map<int, int> last_round;
  for (const auto& r : a.records) {
    CHECK(keys.emplace(r.subject_id, r.round).second);
    int& prev = last_round[r.subject_id];
    CHECK(r.round == prev + 1);
    prev = r.round;
    CHECK(r.mark == doctest::Approx(r.score * config.marker_phi));
    if (!r.excluded) {
      CHECK(r.phi_hat >= 0.0);
      CHECK(r.phi_hat <= 1.0);
    }
    CHECK(r.effort_seconds >= 5.0);
  }
}

TEST_CASE("generate_panel: calibrated defaults land on the target moments") {
  PopulationSpec spec;
  ExperimentConfig config;
  PanelDataset panel = generate_panel(spec, config, 42);
  REQUIRE(panel.subjects.size() == 189);

  double score_sum = 0.0, conf_sum = 0.0;
  int n1 = 0, overconfident = 0;
  for (const auto& r : panel.records) {
    if (r.round != 1) continue;
    score_sum += r.score;
    REQUIRE(r.stated_score_round1.has_value());
    conf_sum += *r.stated_score_round1 - r.score;
    ++n1;
  }
  for (const auto& s : panel.subjects) overconfident += s.overconfident ? 1 : 0;

  // Calibration targets with 3-SE tolerances around the published moments.
  double score_se = 1.2752 / std::sqrt(189.0);
  CHECK(std::fabs(score_sum / n1 - 3.929) < 3.0 * score_se);
  double conf_se = 2.422 / std::sqrt(189.0);
  CHECK(std::fabs(conf_sum / n1 - 2.450) < 3.0 * conf_se);
  // Most of the panel should classify overconfident, like the sample.
  CHECK(overconfident > 94);
  CHECK(overconfident < 189);
}

TEST_CASE("generate_panel: zero subjects is an empty panel") {
  PopulationSpec spec;
  spec.n_subjects = 0;
  PanelDataset panel = generate_panel(spec, ExperimentConfig{}, 1);
  CHECK(panel.records.empty());
  std::ostringstream os;
  write_panel_csv(panel, os);
  CHECK(os.str() == std::string(kPanelCsvHeader) + "\n");
}

TEST_CASE("population spec validation") {
  PopulationSpec bad;
  bad.prior_sd = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  PopulationSpec negative;
  negative.n_subjects = -1;
  CHECK_THROWS_AS(negative.validate(), ConfigError);
}
