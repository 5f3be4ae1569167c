#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "textfract/wavelet.hpp"

namespace textfract::report {

namespace svg_detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// Viridis-like ramp sampled at five stops, t in [0, 1].
inline std::string ramp(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), 3);
  const double u = t - static_cast<double>(i);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[i][0] + u * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + u * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + u * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

inline const char* palette(std::size_t i) {
  static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors[i % 10];
}

}  // namespace svg_detail

/// Minimal 2-D chart: markers, polylines, horizontal bands, point labels.
/// Non-positive values are dropped on log axes.
class Plot {
 public:
  Plot(std::string title, std::string xlabel, std::string ylabel, bool log_x, bool log_y)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)), log_x_(log_x), log_y_(log_y) {}

  Plot& points(const std::vector<double>& x, const std::vector<double>& y, std::string color, std::string label = {},
               double radius = 1.8) {
    layers_.push_back({Kind::Points, x, y, std::move(color), std::move(label), radius, false, {}});
    return *this;
  }
  Plot& line(const std::vector<double>& x, const std::vector<double>& y, std::string color, std::string label = {},
             double width = 1.5, bool dashed = false) {
    layers_.push_back({Kind::Line, x, y, std::move(color), std::move(label), width, dashed, {}});
    return *this;
  }
  Plot& labelled_points(const std::vector<double>& x, const std::vector<double>& y, std::vector<std::string> names,
                        std::string color) {
    layers_.push_back({Kind::Points, x, y, std::move(color), {}, 3.0, false, std::move(names)});
    return *this;
  }
  /// Shaded stripe lo <= y <= hi across the whole x range.
  Plot& hband(double lo, double hi, std::string color, std::string label = {}) {
    layers_.push_back({Kind::Band, {}, {lo, hi}, std::move(color), std::move(label), 0.0, false, {}});
    return *this;
  }

  std::string render(int width = 640, int height = 480) const {
    const double ml = 70, mr = 20, mt = 36, mb = 52;
    const double pw = width - ml - mr, ph = height - mt - mb;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& l : layers_) {
      for (std::size_t i = 0; i < l.x.size() && i < l.y.size(); ++i) {
        if (!usable(l.x[i], log_x_) || !usable(l.y[i], log_y_)) continue;
        x0 = std::min(x0, tx(l.x[i])), x1 = std::max(x1, tx(l.x[i]));
        y0 = std::min(y0, ty(l.y[i])), y1 = std::max(y1, ty(l.y[i]));
      }
      if (l.kind == Kind::Band) {
        for (double v : l.y) {
          if (usable(v, log_y_)) y0 = std::min(y0, ty(v)), y1 = std::max(y1, ty(v));
        }
      }
    }
    if (!(x0 <= x1)) x0 = 0, x1 = 1;
    if (!(y0 <= y1)) y0 = 0, y1 = 1;
    pad(x0, x1), pad(y0, y1);
    auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return mt + ph - (ty(v) - y0) / (y1 - y0) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << svg_detail::fmt(width / 2.0) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << svg_detail::escape(title_) << "</text>\n";
    o << "<g clip-path=\"url(#plot)\">\n<clipPath id=\"plot\"><rect x=\"" << ml << "\" y=\"" << mt << "\" width=\""
      << pw << "\" height=\"" << ph << "\"/></clipPath>\n";
    for (const auto& l : layers_) {
      if (l.kind == Kind::Band) {
        if (!usable(l.y[0], log_y_) || !usable(l.y[1], log_y_)) continue;
        const double top = py(std::max(l.y[0], l.y[1])), bottom = py(std::min(l.y[0], l.y[1]));
        o << "<rect x=\"" << ml << "\" y=\"" << svg_detail::fmt(top) << "\" width=\"" << pw << "\" height=\""
          << svg_detail::fmt(std::max(bottom - top, 1.0)) << "\" fill=\"" << l.color << "\" fill-opacity=\"0.25\"/>\n";
      } else if (l.kind == Kind::Line) {
        o << "<polyline fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\"" << svg_detail::fmt(l.size) << "\""
          << (l.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
        bool first = true;
        for (std::size_t i = 0; i < l.x.size() && i < l.y.size(); ++i) {
          if (!usable(l.x[i], log_x_) || !usable(l.y[i], log_y_)) continue;
          o << (first ? "" : " ") << svg_detail::fmt(px(l.x[i])) << "," << svg_detail::fmt(py(l.y[i]));
          first = false;
        }
        o << "\"/>\n";
      } else {
        std::set<std::pair<long, long>> drawn;  // half-pixel cells already marked
        for (std::size_t i = 0; i < l.x.size() && i < l.y.size(); ++i) {
          if (!usable(l.x[i], log_x_) || !usable(l.y[i], log_y_)) continue;
          if (l.names.empty() && !drawn.emplace(std::lround(2 * px(l.x[i])), std::lround(2 * py(l.y[i]))).second) continue;
          o << "<circle cx=\"" << svg_detail::fmt(px(l.x[i])) << "\" cy=\"" << svg_detail::fmt(py(l.y[i]))
            << "\" r=\"" << svg_detail::fmt(l.size) << "\" fill=\"" << l.color << "\"/>\n";
          if (i < l.names.size()) {
            o << "<text x=\"" << svg_detail::fmt(px(l.x[i]) + 5) << "\" y=\"" << svg_detail::fmt(py(l.y[i]) - 5)
              << "\" font-size=\"10\">" << svg_detail::escape(l.names[i]) << "</text>\n";
          }
        }
      }
    }
    o << "</g>\n";
    o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ticks(x0, x1, log_x_)) {
      const double x = ml + (t - x0) / (x1 - x0) * pw;
      o << "<line x1=\"" << svg_detail::fmt(x) << "\" y1=\"" << mt + ph << "\" x2=\"" << svg_detail::fmt(x)
        << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
      o << "<text x=\"" << svg_detail::fmt(x) << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">"
        << svg_detail::tick_label(log_x_ ? std::pow(10.0, t) : t) << "</text>\n";
    }
    for (double t : ticks(y0, y1, log_y_)) {
      const double y = mt + ph - (t - y0) / (y1 - y0) * ph;
      o << "<line x1=\"" << ml - 5 << "\" y1=\"" << svg_detail::fmt(y) << "\" x2=\"" << ml << "\" y2=\""
        << svg_detail::fmt(y) << "\" stroke=\"black\"/>\n";
      o << "<text x=\"" << ml - 8 << "\" y=\"" << svg_detail::fmt(y + 4) << "\" text-anchor=\"end\">"
        << svg_detail::tick_label(log_y_ ? std::pow(10.0, t) : t) << "</text>\n";
    }
    o << "<text x=\"" << svg_detail::fmt(ml + pw / 2) << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
      << svg_detail::escape(xlabel_) << "</text>\n";
    o << "<text transform=\"translate(16," << svg_detail::fmt(mt + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << svg_detail::escape(ylabel_) << "</text>\n";
    double ly = mt + 16;
    for (const auto& l : layers_) {
      if (l.label.empty()) continue;
      o << "<rect x=\"" << svg_detail::fmt(ml + pw - 150) << "\" y=\"" << svg_detail::fmt(ly - 9)
        << "\" width=\"10\" height=\"10\" fill=\"" << l.color << "\"/>\n";
      o << "<text x=\"" << svg_detail::fmt(ml + pw - 135) << "\" y=\"" << svg_detail::fmt(ly) << "\">"
        << svg_detail::escape(l.label) << "</text>\n";
      ly += 16;
    }
    o << "</svg>\n";
    return o.str();
  }

 private:
  enum class Kind { Points, Line, Band };
  struct Layer {
    Kind kind;
    std::vector<double> x, y;
    std::string color, label;
    double size;
    bool dashed;
    std::vector<std::string> names;
  };

  static bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }
  double tx(double v) const { return log_x_ ? std::log10(v) : v; }
  double ty(double v) const { return log_y_ ? std::log10(v) : v; }

  static void pad(double& lo, double& hi) {
    const double span = hi - lo;
    const double d = span > 0 ? 0.04 * span : (lo != 0 ? 0.1 * std::abs(lo) : 1.0);
    lo -= d, hi += d;
  }

  /// Tick positions in transformed coordinates.
  static std::vector<double> ticks(double lo, double hi, bool log) {
    std::vector<double> out;
    if (log) {
      for (double d = std::ceil(lo); d <= hi; d += 1.0) out.push_back(d);
      if (out.size() >= 2) return out;
    }
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    }
    out.clear();
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * std::abs(hi); t += step) {
      out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return out;
  }

  std::string title_, xlabel_, ylabel_;
  bool log_x_, log_y_;
  std::vector<Layer> layers_;
};

/// |T(s, k)| heatmap, colour scaled from min to max of |T| over the
/// edge-free cells; edge-affected cells are drawn faded. Positions are pooled
/// into at most `max_columns` columns by maximum |T|.
inline std::string wavelet_heatmap(const WaveletMap& map, const std::string& title, std::size_t max_columns = 600,
                                   int width = 800, int height = 420) {
  const std::size_t ns = map.scales.size(), np = map.positions.size();
  const std::size_t cols = std::max<std::size_t>(1, std::min(np, max_columns));
  std::vector<std::vector<double>> cell(ns, std::vector<double>(cols, 0.0));
  std::vector<std::vector<bool>> edge(ns, std::vector<bool>(cols, false));
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t si = 0; si < ns; ++si) {
    for (std::size_t k = 0; k < np; ++k) {
      const std::size_t c = k * cols / np;
      const double a = std::abs(map.coefficients[si][k]);
      cell[si][c] = std::max(cell[si][c], a);
      if (map.edge_affected[si][k]) {
        edge[si][c] = true;
      } else {
        lo = std::min(lo, a), hi = std::max(hi, a);
      }
    }
  }
  if (!(lo < hi)) lo = 0.0, hi = std::max(hi, 1.0);
  const double ml = 60, mr = 20, mt = 36, mb = 48;
  const double pw = width - ml - mr, ph = height - mt - mb;
  const double cw = pw / static_cast<double>(cols), ch = ns ? ph / static_cast<double>(ns) : ph;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"12\" shape-rendering=\"crispEdges\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << svg_detail::fmt(width / 2.0) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
    << svg_detail::escape(title) << "</text>\n";
  for (std::size_t si = 0; si < ns; ++si) {
    const double y = mt + ph - static_cast<double>(si + 1) * ch;
    for (std::size_t c = 0; c < cols; ++c) {
      o << "<rect x=\"" << svg_detail::fmt(ml + static_cast<double>(c) * cw) << "\" y=\"" << svg_detail::fmt(y)
        << "\" width=\"" << svg_detail::fmt(cw + 0.05) << "\" height=\"" << svg_detail::fmt(ch + 0.05) << "\" fill=\""
        << svg_detail::ramp((cell[si][c] - lo) / (hi - lo)) << "\"" << (edge[si][c] ? " fill-opacity=\"0.35\"" : "")
        << "/>\n";
    }
  }
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (std::size_t si = 0; si < ns; si += std::max<std::size_t>(1, ns / 6)) {
    const double y = mt + ph - (static_cast<double>(si) + 0.5) * ch;
    o << "<text x=\"" << ml - 6 << "\" y=\"" << svg_detail::fmt(y + 4) << "\" text-anchor=\"end\">"
      << svg_detail::tick_label(std::round(map.scales[si] * 10.0) / 10.0) << "</text>\n";
  }
  for (std::size_t t = 0; t <= 5 && np; ++t) {
    const std::size_t k = std::min(np - 1, t * (np - 1) / 5);
    const double x = ml + (static_cast<double>(k) + 0.5) / static_cast<double>(np) * pw;
    o << "<text x=\"" << svg_detail::fmt(x) << "\" y=\"" << mt + ph + 16 << "\" text-anchor=\"middle\">"
      << map.positions[k] << "</text>\n";
  }
  o << "<text x=\"" << svg_detail::fmt(ml + pw / 2) << "\" y=\"" << height - 10
    << "\" text-anchor=\"middle\">sentence index j</text>\n";
  o << "<text transform=\"translate(14," << svg_detail::fmt(mt + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">scale s</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace textfract::report
