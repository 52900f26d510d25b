#include "mllab/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mllab/errors.hpp"

namespace mllab {

namespace {

constexpr double kMarginLeft = 60;
constexpr double kMarginRight = 20;
constexpr double kMarginTop = 40;
constexpr double kMarginBottom = 50;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

SvgFigure::SvgFigure(double width, double height) : width_(width), height_(height) {}

void SvgFigure::set_range(double xmin, double xmax, double ymin, double ymax) {
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  xmin_ = xmin;
  xmax_ = xmax;
  ymin_ = ymin;
  ymax_ = ymax;
}

double SvgFigure::sx(double x) const {
  return kMarginLeft + (x - xmin_) / (xmax_ - xmin_) *
                           (width_ - kMarginLeft - kMarginRight);
}

double SvgFigure::sy(double y) const {
  return height_ - kMarginBottom -
         (y - ymin_) / (ymax_ - ymin_) * (height_ - kMarginTop - kMarginBottom);
}

void SvgFigure::add_polyline(const std::vector<std::pair<double, double>>& pts,
                             const std::string& color, double stroke_width,
                             double opacity) {
  if (pts.empty()) return;
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
     << fmt(stroke_width) << "\" stroke-opacity=\"" << fmt(opacity)
     << "\" points=\"";
  for (const auto& [x, y] : pts) os << fmt(sx(x)) << ',' << fmt(sy(y)) << ' ';
  os << "\"/>";
  body_.push_back(os.str());
}

void SvgFigure::add_band(const std::vector<double>& x, const std::vector<double>& lo,
                         const std::vector<double>& hi, const std::string& color,
                         double opacity) {
  if (x.size() != lo.size() || x.size() != hi.size() || x.empty())
    throw std::invalid_argument("add_band: size mismatch");
  std::ostringstream os;
  os << "<polygon fill=\"" << color << "\" fill-opacity=\"" << fmt(opacity)
     << "\" stroke=\"none\" points=\"";
  for (std::size_t i = 0; i < x.size(); ++i)
    os << fmt(sx(x[i])) << ',' << fmt(sy(hi[i])) << ' ';
  for (std::size_t i = x.size(); i-- > 0;)
    os << fmt(sx(x[i])) << ',' << fmt(sy(lo[i])) << ' ';
  os << "\"/>";
  body_.push_back(os.str());
}

void SvgFigure::add_hline(double y, const std::string& color, bool dashed) {
  std::ostringstream os;
  os << "<line x1=\"" << fmt(sx(xmin_)) << "\" y1=\"" << fmt(sy(y)) << "\" x2=\""
     << fmt(sx(xmax_)) << "\" y2=\"" << fmt(sy(y)) << "\" stroke=\"" << color
     << "\" stroke-width=\"1.50\"";
  if (dashed) os << " stroke-dasharray=\"6,4\"";
  os << "/>";
  body_.push_back(os.str());
}

void SvgFigure::add_vline(double x, const std::string& color, bool dashed) {
  std::ostringstream os;
  os << "<line x1=\"" << fmt(sx(x)) << "\" y1=\"" << fmt(sy(ymin_)) << "\" x2=\""
     << fmt(sx(x)) << "\" y2=\"" << fmt(sy(ymax_)) << "\" stroke=\"" << color
     << "\" stroke-width=\"1.50\"";
  if (dashed) os << " stroke-dasharray=\"6,4\"";
  os << "/>";
  body_.push_back(os.str());
}

void SvgFigure::add_scatter(const std::vector<std::pair<double, double>>& pts,
                            const std::string& color, double radius) {
  for (const auto& [x, y] : pts) {
    std::ostringstream os;
    os << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y)) << "\" r=\""
       << fmt(radius) << "\" fill=\"" << color << "\" fill-opacity=\"0.70\"/>";
    body_.push_back(os.str());
  }
}

void SvgFigure::add_legend_entry(const std::string& label, const std::string& color) {
  legend_.emplace_back(label, color);
}

std::string SvgFigure::str() const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_)
     << "\" height=\"" << fmt(height_) << "\" viewBox=\"0 0 " << fmt(width_) << ' '
     << fmt(height_) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes.
  os << "<line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(height_ - kMarginBottom)
     << "\" x2=\"" << fmt(width_ - kMarginRight) << "\" y2=\""
     << fmt(height_ - kMarginBottom) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(kMarginTop)
     << "\" x2=\"" << fmt(kMarginLeft) << "\" y2=\"" << fmt(height_ - kMarginBottom)
     << "\" stroke=\"black\"/>\n";
  // Ticks: five per axis.
  for (int i = 0; i <= 4; ++i) {
    double xv = xmin_ + (xmax_ - xmin_) * i / 4.0;
    double yv = ymin_ + (ymax_ - ymin_) * i / 4.0;
    os << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << fmt(height_ - kMarginBottom + 18)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt_tick(xv) << "</text>\n";
    os << "<text x=\"" << fmt(kMarginLeft - 8) << "\" y=\"" << fmt(sy(yv) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt_tick(yv) << "</text>\n";
  }
  if (!title_.empty())
    os << "<text x=\"" << fmt(width_ / 2) << "\" y=\"22\" font-size=\"15\" "
          "text-anchor=\"middle\">" << title_ << "</text>\n";
  if (!xlabel_.empty())
    os << "<text x=\"" << fmt(width_ / 2) << "\" y=\"" << fmt(height_ - 12)
       << "\" font-size=\"12\" text-anchor=\"middle\">" << xlabel_ << "</text>\n";
  if (!ylabel_.empty())
    os << "<text x=\"16\" y=\"" << fmt(height_ / 2)
       << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << fmt(height_ / 2) << ")\">" << ylabel_ << "</text>\n";
  for (const auto& item : body_) os << item << "\n";
  double ly = kMarginTop + 6;
  for (const auto& [label, color] : legend_) {
    os << "<rect x=\"" << fmt(width_ - kMarginRight - 150) << "\" y=\"" << fmt(ly)
       << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
    os << "<text x=\"" << fmt(width_ - kMarginRight - 132) << "\" y=\"" << fmt(ly + 10)
       << "\" font-size=\"11\">" << label << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
  return os.str();
}

void SvgFigure::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open for writing: " + path);
  f << str();
}

}  // namespace mllab
