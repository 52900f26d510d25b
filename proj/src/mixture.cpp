#include "mllab/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mllab/rng.hpp"

namespace mllab {

namespace {

constexpr double kRidge = 1e-6;
constexpr double kTol = 1e-7;
constexpr int kMaxIter = 500;
constexpr double kCollapseWeight = 1e-8;
constexpr double kLog2Pi = 1.8378770664093454836;

struct Gauss2 {
  Eigen::Matrix2d inv;
  double log_norm;  // -log(2*pi) - 0.5*log(det)
};

Gauss2 precompute(const MixtureComponent& c) {
  double det = c.cov(0, 0) * c.cov(1, 1) - c.cov(0, 1) * c.cov(1, 0);
  Gauss2 g;
  g.inv << c.cov(1, 1), -c.cov(0, 1), -c.cov(1, 0), c.cov(0, 0);
  g.inv /= det;
  g.log_norm = -kLog2Pi - 0.5 * std::log(det);
  return g;
}

double log_gauss(const Gauss2& g, const Eigen::Vector2d& d) {
  double q = d.dot(g.inv * d);
  return g.log_norm - 0.5 * q;
}

Eigen::Matrix2d sample_cov(const std::vector<Eigen::Vector2d>& pts,
                           const Eigen::Vector2d& mean) {
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& p : pts) {
    Eigen::Vector2d d = p - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(pts.size());
  cov(0, 0) += kRidge;
  cov(1, 1) += kRidge;
  return cov;
}

std::vector<int> kmeanspp_centers(const std::vector<Eigen::Vector2d>& pts, int k,
                                  Rng& rng) {
  int n = static_cast<int>(pts.size());
  std::vector<int> centers;
  centers.push_back(static_cast<int>(rng.below(n)));
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = (pts[i] - pts[centers.back()]).squaredNorm();
      d2[i] = std::min(d2[i], d);
      total += d2[i];
    }
    int next;
    if (total > 0.0) {
      double u = rng.uniform() * total;
      double cum = 0.0;
      next = n - 1;
      for (int i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum >= u) {
          next = i;
          break;
        }
      }
    } else {
      next = static_cast<int>(rng.below(n));  // all points coincide
    }
    centers.push_back(next);
  }
  return centers;
}

struct EmRun {
  MixtureModel model;
  bool ok = false;
};

EmRun run_em_once(const std::vector<Eigen::Vector2d>& points, int k, Rng& rng) {
  int n = static_cast<int>(points.size());
  Eigen::Vector2d grand_mean = Eigen::Vector2d::Zero();
  for (const auto& p : points) grand_mean += p;
  grand_mean /= n;
  Eigen::Matrix2d grand_cov = sample_cov(points, grand_mean);

  MixtureModel model;
  model.n_points = n;
  model.components.resize(k);
  std::vector<int> centers = kmeanspp_centers(points, k, rng);
  for (int c = 0; c < k; ++c) {
    model.components[c].weight = 1.0 / k;
    model.components[c].mean = points[centers[c]];
    model.components[c].cov = grand_cov;
  }

  Eigen::MatrixXd resp(n, k);
  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kMaxIter; ++iter) {
    // E step.
    std::vector<Gauss2> gauss(k);
    std::vector<double> logw(k);
    for (int c = 0; c < k; ++c) {
      gauss[c] = precompute(model.components[c]);
      logw[c] = std::log(model.components[c].weight);
    }
    double ll = 0.0;
    for (int i = 0; i < n; ++i) {
      double peak = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        double lp = logw[c] + log_gauss(gauss[c], points[i] - model.components[c].mean);
        resp(i, c) = lp;
        peak = std::max(peak, lp);
      }
      double sum = 0.0;
      for (int c = 0; c < k; ++c) sum += std::exp(resp(i, c) - peak);
      double lse = peak + std::log(sum);
      ll += lse;
      for (int c = 0; c < k; ++c) resp(i, c) = std::exp(resp(i, c) - lse);
    }
    model.loglik_history.push_back(ll);

    // M step.
    bool collapsed = false;
    for (int c = 0; c < k; ++c) {
      double nk = resp.col(c).sum();
      if (nk / n < kCollapseWeight) {
        // Re-seed a dead component at a random point and keep going.
        model.components[c].weight = 1.0 / n;
        model.components[c].mean = points[rng.below(n)];
        model.components[c].cov = grand_cov;
        model.reinit_flag = true;
        collapsed = true;
        continue;
      }
      Eigen::Vector2d mu = Eigen::Vector2d::Zero();
      for (int i = 0; i < n; ++i) mu += resp(i, c) * points[i];
      mu /= nk;
      Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
      for (int i = 0; i < n; ++i) {
        Eigen::Vector2d d = points[i] - mu;
        cov += resp(i, c) * (d * d.transpose());
      }
      cov /= nk;
      cov(0, 0) += kRidge;
      cov(1, 1) += kRidge;
      model.components[c].weight = nk / n;
      model.components[c].mean = mu;
      model.components[c].cov = cov;
    }
    if (collapsed) {
      // Renormalize weights after the re-seed; the likelihood may dip, so
      // the recorded history restarts here.
      double wsum = 0.0;
      for (const auto& c : model.components) wsum += c.weight;
      for (auto& c : model.components) c.weight /= wsum;
      model.loglik_history.clear();
      prev_ll = -std::numeric_limits<double>::infinity();
      continue;
    }

    if (ll - prev_ll < kTol && iter > 0) break;
    prev_ll = ll;
  }

  // Final log-likelihood at the last parameter set.
  double ll = 0.0;
  std::vector<Gauss2> gauss(k);
  for (int c = 0; c < k; ++c) gauss[c] = precompute(model.components[c]);
  for (int i = 0; i < n; ++i) {
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> lp(k);
    for (int c = 0; c < k; ++c) {
      lp[c] = std::log(model.components[c].weight) +
              log_gauss(gauss[c], points[i] - model.components[c].mean);
      peak = std::max(peak, lp[c]);
    }
    double sum = 0.0;
    for (int c = 0; c < k; ++c) sum += std::exp(lp[c] - peak);
    ll += peak + std::log(sum);
  }
  model.log_likelihood = ll;
  int p = model.free_parameters();
  model.bic = p * std::log(static_cast<double>(n)) - 2.0 * ll;
  model.aic = 2.0 * p - 2.0 * ll;
  return {std::move(model), true};
}

}  // namespace

double MixtureModel::log_density(const Eigen::Vector2d& p) const {
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> lp(components.size());
  for (std::size_t c = 0; c < components.size(); ++c) {
    Gauss2 g = precompute(components[c]);
    lp[c] = std::log(components[c].weight) + log_gauss(g, p - components[c].mean);
    peak = std::max(peak, lp[c]);
  }
  double sum = 0.0;
  for (double v : lp) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

std::vector<int> MixtureModel::hard_assignment(
    const std::vector<Eigen::Vector2d>& points) const {
  std::vector<Gauss2> gauss(components.size());
  for (std::size_t c = 0; c < components.size(); ++c)
    gauss[c] = precompute(components[c]);
  std::vector<int> labels(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    int arg = 0;
    for (std::size_t c = 0; c < components.size(); ++c) {
      double lp = std::log(components[c].weight) +
                  log_gauss(gauss[c], points[i] - components[c].mean);
      if (lp > best) {  // strict: ties keep the lowest index
        best = lp;
        arg = static_cast<int>(c);
      }
    }
    labels[i] = arg;
  }
  return labels;
}

MixtureModel em_fit(const std::vector<Eigen::Vector2d>& points, int k,
                    std::uint64_t seed, int n_init) {
  int n = static_cast<int>(points.size());
  if (k < 1) throw std::invalid_argument("em_fit: k must be >= 1");
  if (n < k) throw std::invalid_argument("em_fit: fewer points than components");
  for (const auto& p : points)
    if (!p.allFinite()) throw std::invalid_argument("em_fit: non-finite point");

  MixtureModel best;
  bool have = false;
  for (int init = 0; init < n_init; ++init) {
    Rng rng(derive_seed(seed, seed_stream::kInit, static_cast<std::uint64_t>(init)));
    EmRun run = run_em_once(points, k, rng);
    if (!run.ok) continue;
    if (!have || run.model.log_likelihood > best.log_likelihood) {
      best = std::move(run.model);
      have = true;
    }
  }
  return best;
}

ModelSelection select_model(const std::vector<Eigen::Vector2d>& points,
                            int k_min, int k_max, Criterion criterion,
                            std::uint64_t seed) {
  if (k_min < 1 || k_max < k_min)
    throw std::invalid_argument("select_model: bad k range");
  int cap = std::min<int>(k_max, static_cast<int>(points.size()));
  ModelSelection sel;
  sel.criterion = criterion;
  bool have = false;
  for (int k = k_min; k <= cap; ++k) {
    MixtureModel m = em_fit(points, k, derive_seed(seed, 0x4b5345u, k));
    double score = criterion == Criterion::Bic ? m.bic : m.aic;
    sel.score_table.emplace_back(k, score);
    double best_score = criterion == Criterion::Bic ? sel.best.bic : sel.best.aic;
    if (!have || score < best_score) {
      sel.best = std::move(m);
      have = true;
    }
  }
  if (!have) throw std::invalid_argument("select_model: empty k range");
  return sel;
}

double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("rand_index: size mismatch");
  std::size_t n = a.size();
  if (n < 2) return 1.0;
  long long agree = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      bool same_a = a[i] == a[j];
      bool same_b = b[i] == b[j];
      agree += (same_a == same_b) ? 1 : 0;
      ++total;
    }
  return static_cast<double>(agree) / static_cast<double>(total);
}

ScaleRobustnessReport scale_robustness(const std::vector<Eigen::Vector2d>& points,
                                       int dim, double factor, Criterion criterion,
                                       std::uint64_t seed, int k_min, int k_max) {
  if (dim != 0 && dim != 1) throw std::invalid_argument("scale_robustness: dim must be 0 or 1");
  ScaleRobustnessReport report;
  report.dim = dim;
  report.factor = factor;
  report.base = select_model(points, k_min, k_max, criterion, seed);
  std::vector<Eigen::Vector2d> scaled = points;
  for (auto& p : scaled) p[dim] *= factor;
  report.scaled = select_model(scaled, k_min, k_max, criterion, seed);
  report.rand = rand_index(report.base.best.hard_assignment(points),
                           report.scaled.best.hard_assignment(scaled));
  return report;
}

}  // namespace mllab
