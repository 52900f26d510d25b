#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace mllab {

enum class Criterion { Bic, Aic };

struct MixtureComponent {
  double weight = 0.0;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();
};

/// 2-D Gaussian mixture with full covariances. Free parameter count for
/// the information criteria: (k-1) weights + 2k means + 3k covariances.
struct MixtureModel {
  std::vector<MixtureComponent> components;
  double log_likelihood = 0.0;
  double bic = 0.0;
  double aic = 0.0;
  int n_points = 0;
  std::vector<double> loglik_history;  // winning run, one entry per iteration
  bool reinit_flag = false;            // a collapsed component was restarted

  int k() const { return static_cast<int>(components.size()); }
  int free_parameters() const { return 6 * k() - 1; }

  /// Log density of one point under the mixture.
  double log_density(const Eigen::Vector2d& p) const;

  /// Argmax-responsibility labels; ties break to the lowest component index.
  std::vector<int> hard_assignment(const std::vector<Eigen::Vector2d>& points) const;
};

/// EM fit, best of n_init k-means++ initializations. E step in log space,
/// M step with a 1e-6 ridge on covariance diagonals; stops when the
/// log-likelihood gain drops below 1e-7 or after 500 iterations.
/// Components whose weight collapses below 1e-8 are re-seeded and flagged.
MixtureModel em_fit(const std::vector<Eigen::Vector2d>& points, int k,
                    std::uint64_t seed, int n_init = 10);

struct ModelSelection {
  MixtureModel best;
  Criterion criterion = Criterion::Bic;
  std::vector<std::pair<int, double>> score_table;  // (k, criterion score)
};

/// Fits every k in [k_min, k_max] (capped at n) and keeps the
/// criterion-minimizing model.
ModelSelection select_model(const std::vector<Eigen::Vector2d>& points,
                            int k_min, int k_max, Criterion criterion,
                            std::uint64_t seed);

/// Fraction of point pairs on which two labelings agree.
double rand_index(const std::vector<int>& a, const std::vector<int>& b);

struct ScaleRobustnessReport {
  ModelSelection base;
  ModelSelection scaled;
  double factor = 1.0;
  int dim = 0;
  double rand = 0.0;  // agreement between the two hard assignments
};

/// Re-runs model selection after multiplying one coordinate by factor and
/// compares the hard assignments via the Rand index.
ScaleRobustnessReport scale_robustness(const std::vector<Eigen::Vector2d>& points,
                                       int dim, double factor, Criterion criterion,
                                       std::uint64_t seed, int k_min = 1,
                                       int k_max = 15);

}  // namespace mllab
