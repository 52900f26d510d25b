#pragma once

#include <vector>

#include "mllab/model.hpp"

namespace mllab {

/// Discrete posterior over the marker parameter phi on a uniform grid in
/// (0,1]. Values are immutable snapshots; updates return a new grid.
class BeliefGrid {
public:
  static constexpr int kDefaultPoints = 200;

  /// Flat prior over the full support.
  static BeliefGrid uniform(int points = kDefaultPoints);

  /// Normal(mean, sd) prior truncated to the grid support.
  static BeliefGrid truncated_normal(double mean, double sd,
                                     int points = kDefaultPoints);

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& mass() const { return mass_; }
  int points() const { return static_cast<int>(support_.size()); }

  double mean() const;
  double variance() const;
  /// Smallest grid value whose cumulative mass reaches p.
  double quantile(double p) const;

  /// Total-mass error; the invariant keeps it within 1e-9 of zero.
  double normalization_error() const;

  /// Grid with given masses (renormalized); used by the updater.
  BeliefGrid(std::vector<double> support, std::vector<double> mass);

private:
  std::vector<double> support_;
  std::vector<double> mass_;
};

/// One Bayes step on the gross mark channel: the likelihood of observing
/// nu given grid point phi_k is Normal(phi_k * f(a~, effort), sigma^2).
/// With sigma = 0 the update is an exact inversion: a point mass at the
/// grid point nearest to nu / f(a~, effort), clamped to the support.
/// Throws DegenerateUpdateError when the noise-free inversion lands on a
/// point the prior rules out.
BeliefGrid bayes_update(const BeliefGrid& prior, const Technology& tech,
                        double believed_ability, double effort,
                        double observed_gross);

}  // namespace mllab
