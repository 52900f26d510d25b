#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mllab/kde.hpp"
#include "mllab/rng.hpp"

using namespace mllab;

TEST_CASE("kde: repeated value with a fixed bandwidth is a gaussian bump") {
  std::vector<double> values(50, 2.0);
  KdeCurve curve = kde(values, 0.25);
  // Peak at the data point with the gaussian height 1/(h*sqrt(2pi)).
  double peak = 0.0, peak_x = 0.0;
  for (std::size_t i = 0; i < curve.x.size(); ++i)
    if (curve.density[i] > peak) {
      peak = curve.density[i];
      peak_x = curve.x[i];
    }
  CHECK(std::fabs(peak_x - 2.0) < 0.01);
  CHECK(peak == doctest::Approx(1.0 / (0.25 * std::sqrt(2 * M_PI))).epsilon(1e-3));
  CHECK(std::fabs(curve.integral() - 1.0) < 1e-3);
}

TEST_CASE("kde: silverman bandwidth matches the rule on a known sample") {
  Rng rng(88);
  std::vector<double> values;
  for (int i = 0; i < 400; ++i) values.push_back(rng.normal(0.0, 1.0));
  KdeCurve curve = kde(values);
  // Recompute the rule by hand.
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / (values.size() - 1));
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  auto q = [&](double p) {
    double pos = p * (sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    double frac = pos - lo;
    return sorted[lo] * (1 - frac) + sorted[lo + 1] * frac;
  };
  double iqr = q(0.75) - q(0.25);
  double want = 0.9 * std::min(sd, iqr / 1.34) *
                std::pow(static_cast<double>(values.size()), -0.2);
  CHECK(curve.bandwidth == doctest::Approx(want).epsilon(1e-12));
  CHECK(std::fabs(curve.integral() - 1.0) < 1e-3);
}

TEST_CASE("kde: standard normal density recovered within 0.02 pointwise") {
  Rng rng(321);
  std::vector<double> values;
  for (int i = 0; i < 10000; ++i) values.push_back(rng.normal(0.0, 1.0));
  KdeCurve curve = kde(values);
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    double x = curve.x[i];
    double truth = std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI);
    worst = std::max(worst, std::fabs(curve.density[i] - truth));
  }
  CHECK(worst < 0.02);
}

TEST_CASE("kde preconditions") {
  CHECK_THROWS_AS(kde({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(kde({1.0, 2.0}, 0.0), std::invalid_argument);
  // Degenerate sample without a fixed bandwidth has no usable spread.
  CHECK_THROWS_AS(kde({3.0, 3.0, 3.0}), std::invalid_argument);
}
