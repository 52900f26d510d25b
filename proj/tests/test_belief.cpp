#include <doctest.h>

#include <cmath>

#include "mllab/belief.hpp"
#include "mllab/errors.hpp"
#include "oracles.hpp"

using namespace mllab;

namespace {

Technology tech_with_sigma(double sigma) {
  Technology t;
  t.noise_sigma = sigma;
  return t;
}

}  // namespace

TEST_CASE("uniform prior: every point carries 1/200") {
  BeliefGrid g = BeliefGrid::uniform();
  CHECK(g.points() == 200);
  CHECK(g.support().front() == doctest::Approx(0.005));
  CHECK(g.support().back() == doctest::Approx(1.0));
  for (double m : g.mass()) CHECK(m == doctest::Approx(1.0 / 200).epsilon(1e-12));
  CHECK(std::fabs(g.normalization_error()) < 1e-12);
}

TEST_CASE("huge-sd truncated normal collapses to the flat prior") {
  BeliefGrid flat = BeliefGrid::truncated_normal(0.5, 1e6);
  for (double m : flat.mass())
    CHECK(std::fabs(m - 1.0 / 200) < 1e-4);
}

TEST_CASE("symmetric truncated normal centers on its location") {
  BeliefGrid g = BeliefGrid::truncated_normal(0.5, 0.1);
  CHECK(std::fabs(g.mean() - 0.5) < 1e-3);
  CHECK_THROWS_AS(BeliefGrid::truncated_normal(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BeliefGrid::truncated_normal(0.5, -1.0), std::invalid_argument);
}

TEST_CASE("quantiles are monotone grid values") {
  BeliefGrid g = BeliefGrid::truncated_normal(0.4, 0.2);
  CHECK(g.quantile(0.25) <= g.quantile(0.5));
  CHECK(g.quantile(0.5) <= g.quantile(0.75));
}

TEST_CASE("noise-free update inverts the observation exactly") {
  BeliefGrid prior = BeliefGrid::uniform();
  // f(5, 1) = 5, so observing 2.0 pins phi at 0.40, a grid point.
  BeliefGrid post = bayes_update(prior, tech_with_sigma(0.0), 5.0, 1.0, 2.0);
  CHECK(post.mean() == doctest::Approx(0.40).epsilon(1e-12));
  int heavy = 0;
  for (double m : post.mass())
    if (m > 0.0) ++heavy;
  CHECK(heavy == 1);
}

TEST_CASE("noise-free update on a hostile prior degenerates") {
  // Point-mass prior at 0.8; a noise-free observation pointing at 0.4
  // wipes the posterior out.
  std::vector<double> mass(200, 0.0);
  mass[159] = 1.0;  // phi = 0.8
  BeliefGrid prior(BeliefGrid::uniform().support(), std::move(mass));
  CHECK_THROWS_AS(bayes_update(prior, tech_with_sigma(0.0), 5.0, 1.0, 2.0),
                  DegenerateUpdateError);
}

TEST_CASE("flat likelihood leaves the prior untouched") {
  BeliefGrid prior = BeliefGrid::truncated_normal(0.35, 0.22);
  BeliefGrid post = bayes_update(prior, tech_with_sigma(1e6), 5.0, 1.0, 2.0);
  for (int k = 0; k < prior.points(); ++k)
    CHECK(std::fabs(post.mass()[k] - prior.mass()[k]) < 1e-6);
}

TEST_CASE("gaussian update matches the truncated-normal oracle") {
  BeliefGrid prior = BeliefGrid::uniform();
  BeliefGrid post = bayes_update(prior, tech_with_sigma(0.35), 5.0, 1.0, 2.0);
  // Posterior in phi is Normal(0.4, (0.35/5)^2) truncated to (0,1]; compute
  // its mean from the erf series.
  long double mu = 0.4L, sd = 0.07L;
  long double a = (0.0L - mu) / sd, b = (1.0L - mu) / sd;
  auto phi_pdf = [](long double z) {
    return std::exp(-0.5L * z * z) / std::sqrt(2.0L * 3.141592653589793238L);
  };
  long double z_mass = oracles::normal_cdf(b) - oracles::normal_cdf(a);
  long double want = mu + sd * (phi_pdf(a) - phi_pdf(b)) / z_mass;
  CHECK(std::fabs(post.mean() - static_cast<double>(want)) < 1e-3);
}

TEST_CASE("updates preserve nonnegativity and normalization") {
  BeliefGrid belief = BeliefGrid::uniform();
  Technology t = tech_with_sigma(0.35);
  for (int i = 0; i < 25; ++i) {
    belief = bayes_update(belief, t, 5.0, 1.0 + 0.01 * i, 1.2 + 0.05 * i);
    double total = 0.0;
    for (double m : belief.mass()) {
      CHECK(m >= 0.0);
      total += m;
    }
    CHECK(std::fabs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("update preconditions") {
  BeliefGrid prior = BeliefGrid::uniform();
  Technology t = tech_with_sigma(0.35);
  CHECK_THROWS_AS(bayes_update(prior, t, 5.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bayes_update(prior, t, 5.0, 1.0, std::nan("")),
                  std::invalid_argument);
}
