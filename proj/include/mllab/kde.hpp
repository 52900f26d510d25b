#pragma once

#include <optional>
#include <vector>

namespace mllab {

struct KdeCurve {
  std::vector<double> x;
  std::vector<double> density;
  double bandwidth = 0.0;

  /// Trapezoid integral over the grid; should be 1 within 1e-3.
  double integral() const;
};

/// Gaussian kernel density on an evenly spaced grid padded four
/// bandwidths beyond the sample range. Bandwidth defaults to Silverman's
/// rule h = 0.9 * min(sd, IQR/1.34) * n^(-1/5) (falling back to the sd
/// when the IQR degenerates); pass fixed_h to override.
KdeCurve kde(const std::vector<double>& values,
             std::optional<double> fixed_h = std::nullopt, int grid_points = 512);

}  // namespace mllab
