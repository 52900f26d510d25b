#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mllab {

/// Minimal deterministic SVG line/scatter/band plotter. Output bytes are
/// a pure function of the calls made, so figures diff cleanly in tests.
class SvgFigure {
public:
  SvgFigure(double width = 800, double height = 500);

  void set_title(const std::string& title) { title_ = title; }
  void set_labels(const std::string& x, const std::string& y) {
    xlabel_ = x;
    ylabel_ = y;
  }
  /// Data ranges must be set before adding geometry.
  void set_range(double xmin, double xmax, double ymin, double ymax);

  void add_polyline(const std::vector<std::pair<double, double>>& pts,
                    const std::string& color, double stroke_width = 1.5,
                    double opacity = 1.0);
  void add_band(const std::vector<double>& x, const std::vector<double>& lo,
                const std::vector<double>& hi, const std::string& color,
                double opacity = 0.25);
  void add_hline(double y, const std::string& color, bool dashed = false);
  void add_vline(double x, const std::string& color, bool dashed = false);
  void add_scatter(const std::vector<std::pair<double, double>>& pts,
                   const std::string& color, double radius = 3.0);
  void add_legend_entry(const std::string& label, const std::string& color);

  std::string str() const;
  void save(const std::string& path) const;

private:
  double sx(double x) const;
  double sy(double y) const;

  double width_, height_;
  double xmin_ = 0, xmax_ = 1, ymin_ = 0, ymax_ = 1;
  std::string title_, xlabel_, ylabel_;
  std::vector<std::string> body_;
  std::vector<std::pair<std::string, std::string>> legend_;
};

}  // namespace mllab
