#include "mllab/kde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mllab {

double KdeCurve::integral() const {
  double total = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    total += 0.5 * (density[i] + density[i - 1]) * (x[i] - x[i - 1]);
  return total;
}

KdeCurve kde(const std::vector<double>& values, std::optional<double> fixed_h,
             int grid_points) {
  std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("kde: need at least two observations");
  if (grid_points < 2) throw std::invalid_argument("kde: grid too small");

  double h;
  if (fixed_h) {
    h = *fixed_h;
    if (!(h > 0.0)) throw std::invalid_argument("kde: bandwidth must be positive");
  } else {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / (n - 1));

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    auto quartile = [&](double p) {
      double pos = p * (n - 1);
      std::size_t lo = static_cast<std::size_t>(pos);
      double frac = pos - lo;
      return lo + 1 < n ? sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac
                        : sorted[lo];
    };
    double iqr = quartile(0.75) - quartile(0.25);
    double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
    if (!(h > 0.0))
      throw std::invalid_argument("kde: degenerate sample; supply a bandwidth");
  }

  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it - 4.0 * h;
  double hi = *hi_it + 4.0 * h;

  KdeCurve curve;
  curve.bandwidth = h;
  curve.x.resize(grid_points);
  curve.density.resize(grid_points);
  double step = (hi - lo) / (grid_points - 1);
  double norm = 1.0 / (n * h * 2.5066282746310005);
  for (int g = 0; g < grid_points; ++g) {
    double xg = lo + g * step;
    double sum = 0.0;
    for (double v : values) {
      double z = (xg - v) / h;
      sum += std::exp(-0.5 * z * z);
    }
    curve.x[g] = xg;
    curve.density[g] = norm * sum;
  }
  return curve;
}

}  // namespace mllab
