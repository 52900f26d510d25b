#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mllab/protocol.hpp"

namespace mllab {

/// Long-format panel: one row per (subject, round) with named numeric
/// columns. The estimators all consume this shape.
struct LongPanel {
  std::vector<int> subject;  // per-row subject id
  std::vector<int> round;    // per-row round
  std::map<std::string, Eigen::VectorXd> columns;

  int rows() const { return static_cast<int>(subject.size()); }
  bool has(const std::string& name) const { return columns.count(name) > 0; }
  const Eigen::VectorXd& col(const std::string& name) const;

  /// Keep only rows where pred(row index) holds.
  LongPanel filter(const std::vector<bool>& keep) const;
};

/// Flattens a protocol panel into long format. Columns: score, mark, bid,
/// phi_hat, effort_seconds, overconfident, stated_score_r1 (NaN after
/// round 1), male, age, white, excluded.
LongPanel to_long_panel(const PanelDataset& panel);

}  // namespace mllab
