#include "mllab/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mllab/errors.hpp"

namespace mllab {

namespace {

std::vector<double> make_support(int points) {
  if (points < 2) throw std::invalid_argument("belief grid needs >= 2 points");
  std::vector<double> s(points);
  for (int k = 0; k < points; ++k)
    s[k] = static_cast<double>(k + 1) / static_cast<double>(points);
  return s;
}

void normalize(std::vector<double>& mass) {
  double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total))
    throw DegenerateUpdateError("belief mass vanished; no grid point is consistent");
  for (double& m : mass) m /= total;
}

}  // namespace

BeliefGrid::BeliefGrid(std::vector<double> support, std::vector<double> mass)
    : support_(std::move(support)), mass_(std::move(mass)) {
  if (support_.size() != mass_.size() || support_.size() < 2)
    throw std::invalid_argument("support/mass size mismatch");
  for (double m : mass_)
    if (m < 0.0 || !std::isfinite(m))
      throw std::invalid_argument("belief masses must be finite and nonnegative");
  normalize(mass_);
}

BeliefGrid BeliefGrid::uniform(int points) {
  std::vector<double> mass(points, 1.0 / points);
  return BeliefGrid(make_support(points), std::move(mass));
}

BeliefGrid BeliefGrid::truncated_normal(double mean, double sd, int points) {
  if (!(sd > 0.0)) throw std::invalid_argument("truncated_normal: sd must be positive");
  if (!std::isfinite(mean)) throw std::invalid_argument("truncated_normal: bad mean");
  std::vector<double> support = make_support(points);
  std::vector<double> mass(points);
  for (int k = 0; k < points; ++k) {
    double z = (support[k] - mean) / sd;
    mass[k] = std::exp(-0.5 * z * z);
  }
  return BeliefGrid(std::move(support), std::move(mass));
}

double BeliefGrid::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < support_.size(); ++k) m += support_[k] * mass_[k];
  return m;
}

double BeliefGrid::variance() const {
  double mu = mean();
  double v = 0.0;
  for (std::size_t k = 0; k < support_.size(); ++k) {
    double d = support_[k] - mu;
    v += d * d * mass_[k];
  }
  return v;
}

double BeliefGrid::quantile(double p) const {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0,1]");
  double cum = 0.0;
  for (std::size_t k = 0; k < support_.size(); ++k) {
    cum += mass_[k];
    if (cum >= p) return support_[k];
  }
  return support_.back();
}

double BeliefGrid::normalization_error() const {
  return std::accumulate(mass_.begin(), mass_.end(), 0.0) - 1.0;
}

BeliefGrid bayes_update(const BeliefGrid& prior, const Technology& tech,
                        double believed_ability, double effort,
                        double observed_gross) {
  if (!(effort > 0.0))
    throw std::invalid_argument("bayes_update: effort must be positive");
  if (!std::isfinite(observed_gross))
    throw std::invalid_argument("bayes_update: observation must be finite");
  double scale = tech.output(believed_ability, effort);  // f(a~, e)
  const auto& support = prior.support();
  const auto& prior_mass = prior.mass();
  int n = prior.points();

  if (tech.noise_sigma == 0.0) {
    // Exact inversion: nu / f(a~,e), snapped to the nearest grid point.
    double ratio = observed_gross / scale;
    ratio = std::clamp(ratio, support.front(), support.back());
    int idx = static_cast<int>(std::lround(ratio * n)) - 1;
    idx = std::clamp(idx, 0, n - 1);
    // Snap to whichever neighbour is actually closer (guards rounding).
    if (idx + 1 < n &&
        std::fabs(support[idx + 1] - ratio) < std::fabs(support[idx] - ratio))
      ++idx;
    if (idx > 0 && std::fabs(support[idx - 1] - ratio) < std::fabs(support[idx] - ratio))
      --idx;
    if (!(prior_mass[idx] > 0.0))
      throw DegenerateUpdateError(
          "noise-free observation incompatible with the prior support");
    std::vector<double> mass(n, 0.0);
    mass[idx] = 1.0;
    return BeliefGrid(support, std::move(mass));
  }

  // Log-space product, normalized against the peak for stability.
  double inv_two_var = 0.5 / (tech.noise_sigma * tech.noise_sigma);
  std::vector<double> logw(n, -std::numeric_limits<double>::infinity());
  double peak = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    if (!(prior_mass[k] > 0.0)) continue;
    double resid = observed_gross - support[k] * scale;
    logw[k] = std::log(prior_mass[k]) - resid * resid * inv_two_var;
    peak = std::max(peak, logw[k]);
  }
  if (!std::isfinite(peak))
    throw DegenerateUpdateError("prior carries no mass on the grid");
  std::vector<double> mass(n, 0.0);
  for (int k = 0; k < n; ++k)
    if (std::isfinite(logw[k])) mass[k] = std::exp(logw[k] - peak);
  return BeliefGrid(support, std::move(mass));
}

}  // namespace mllab
