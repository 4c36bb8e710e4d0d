#include "flocksim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "flocksim/errors.hpp"

namespace flocksim {

namespace {

constexpr double kWidth = 880.0, kHeight = 620.0;
constexpr double kLeft = 78.0, kRight = 700.0;   // plot area x range
constexpr double kTop = 52.0, kBottom = 556.0;   // plot area y range

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  void include(double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  void pad(double frac) {
    const double span = hi - lo;
    if (span <= 0.0) {
      lo -= 1.0;
      hi += 1.0;
    } else {
      lo -= frac * span;
      hi += frac * span;
    }
  }
};

Range range_of(const std::vector<const std::vector<double>*>& cols) {
  Range r{std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()};
  for (const auto* c : cols)
    for (double x : *c) r.include(x);
  if (!std::isfinite(r.lo)) r = {0.0, 1.0};
  return r;
}

std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  const double span = hi - lo;
  if (span <= 0.0) return {lo};
  double step = std::pow(10.0, std::floor(std::log10(span / target)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (span / (step * m) <= target) {
      step *= m;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span;
       t += step)
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  return ticks;
}

class Canvas {
 public:
  Canvas(Range xr, Range yr) : xr_(xr), yr_(yr) {}

  double px(double x) const {
    return kLeft + (x - xr_.lo) / (xr_.hi - xr_.lo) * (kRight - kLeft);
  }
  double py(double y) const {
    return kBottom - (y - yr_.lo) / (yr_.hi - yr_.lo) * (kBottom - kTop);
  }

  void line(double x1, double y1, double x2, double y2,
            const std::string& style) {
    body_ << "<line x1=\"" << fmt(px(x1)) << "\" y1=\"" << fmt(py(y1))
          << "\" x2=\"" << fmt(px(x2)) << "\" y2=\"" << fmt(py(y2)) << "\" "
          << style << "/>\n";
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& color, bool dashed) {
    body_ << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.6\"";
    if (dashed) body_ << " stroke-dasharray=\"7 4\"";
    body_ << " points=\"";
    for (std::size_t k = 0; k < xs.size(); ++k)
      body_ << fmt(px(xs[k])) << "," << fmt(py(ys[k])) << " ";
    body_ << "\"/>\n";
  }

  void circle(double x, double y, double r, const std::string& fill,
              const std::string& stroke) {
    body_ << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
          << "\" r=\"" << fmt(r) << "\" fill=\"" << fill << "\" stroke=\""
          << stroke << "\"/>\n";
  }

  void square(double x, double y, double r, const std::string& fill,
              const std::string& stroke) {
    body_ << "<rect x=\"" << fmt(px(x) - r) << "\" y=\"" << fmt(py(y) - r)
          << "\" width=\"" << fmt(2 * r) << "\" height=\"" << fmt(2 * r)
          << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
  }

  void text(double xpix, double ypix, const std::string& s,
            const std::string& attrs = "") {
    body_ << "<text x=\"" << fmt(xpix) << "\" y=\"" << fmt(ypix)
          << "\" font-family=\"sans-serif\" font-size=\"13\" " << attrs << ">"
          << s << "</text>\n";
  }

  void axes(const std::string& xlabel, const std::string& ylabel,
            const std::string& title) {
    body_ << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
          << kRight - kLeft << "\" height=\"" << kBottom - kTop
          << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (double t : nice_ticks(xr_.lo, xr_.hi)) {
      const double x = px(t);
      body_ << "<line x1=\"" << fmt(x) << "\" y1=\"" << kBottom << "\" x2=\""
            << fmt(x) << "\" y2=\"" << kBottom + 5 << "\" stroke=\"#333\"/>\n";
      body_ << "<line x1=\"" << fmt(x) << "\" y1=\"" << kTop << "\" x2=\""
            << fmt(x) << "\" y2=\"" << kBottom
            << "\" stroke=\"#ddd\" stroke-width=\"0.6\"/>\n";
      text(x - 12, kBottom + 20, fmt(t));
    }
    for (double t : nice_ticks(yr_.lo, yr_.hi)) {
      const double y = py(t);
      body_ << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt(y) << "\" x2=\""
            << kLeft << "\" y2=\"" << fmt(y) << "\" stroke=\"#333\"/>\n";
      body_ << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(y) << "\" x2=\""
            << kRight << "\" y2=\"" << fmt(y)
            << "\" stroke=\"#ddd\" stroke-width=\"0.6\"/>\n";
      text(kLeft - 10, y + 4, fmt(t), "text-anchor=\"end\"");
    }
    text(0.5 * (kLeft + kRight) - 20, kBottom + 42, xlabel);
    body_ << "<text x=\"20\" y=\"" << 0.5 * (kTop + kBottom)
          << "\" font-family=\"sans-serif\" font-size=\"13\" transform=\""
          << "rotate(-90 20 " << 0.5 * (kTop + kBottom) << ")\">" << ylabel
          << "</text>\n";
    text(kLeft, kTop - 14, title, "font-size=\"15\" font-weight=\"bold\"");
  }

  void legend_entry(int slot, const std::string& color, bool dashed,
                    const std::string& label) {
    const double y = kTop + 14 + 22.0 * slot;
    body_ << "<line x1=\"" << kRight + 14 << "\" y1=\"" << fmt(y) << "\" x2=\""
          << kRight + 48 << "\" y2=\"" << fmt(y) << "\" stroke=\"" << color
          << "\" stroke-width=\"2\""
          << (dashed ? " stroke-dasharray=\"7 4\"" : "") << "/>\n";
    text(kRight + 54, y + 4, label);
  }

  void save(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("emit_plot: cannot open " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
        << kHeight << "\">\n<rect width=\"100%\" height=\"100%\" fill=\""
        << "white\"/>\n"
        << body_.str() << "</svg>\n";
    if (!out) throw ConfigError("emit_plot: write failed for " + path.string());
  }

 private:
  Range xr_, yr_;
  std::ostringstream body_;
};

int follower_count(const CsvTable& log) {
  int n = 0;
  while (log.has_col("q" + std::to_string(n + 1) + "_x")) ++n;
  if (n == 0) throw ConfigError("emit_plot: no follower position columns");
  return n;
}

void plot_trajectory(const CsvTable& log, const std::filesystem::path& path,
                     double radius) {
  const int n = follower_count(log);
  std::vector<const std::vector<double>*> xcols, ycols;
  xcols.push_back(&log.columns[log.col("q0_x")]);
  ycols.push_back(&log.columns[log.col("q0_y")]);
  for (int i = 1; i <= n; ++i) {
    xcols.push_back(&log.columns[log.col("q" + std::to_string(i) + "_x")]);
    ycols.push_back(&log.columns[log.col("q" + std::to_string(i) + "_y")]);
  }
  Range xr = range_of(xcols), yr = range_of(ycols);
  xr.pad(0.07);
  yr.pad(0.07);
  // equal scale for a planar map
  const double xspan = xr.hi - xr.lo, yspan = yr.hi - yr.lo;
  const double aspect = (kRight - kLeft) / (kBottom - kTop);
  if (xspan / yspan < aspect) {
    const double grow = 0.5 * (yspan * aspect - xspan);
    xr.lo -= grow;
    xr.hi += grow;
  } else {
    const double grow = 0.5 * (xspan / aspect - yspan);
    yr.lo -= grow;
    yr.hi += grow;
  }
  Canvas canvas(xr, yr);
  canvas.axes("x [m]", "y [m]", "agent trajectories (leader dashed)");

  // initial-edge overlay from the first sample
  auto x0 = [&](int a) { return (*xcols[a]).front(); };
  auto y0 = [&](int a) { return (*ycols[a]).front(); };
  for (int a = 0; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      const double dx = x0(a) - x0(b), dy = y0(a) - y0(b);
      if (std::hypot(dx, dy) < radius) {
        const bool leader_edge = a == 0;
        canvas.line(x0(a), y0(a), x0(b), y0(b),
                    leader_edge
                        ? "stroke=\"#555\" stroke-width=\"1.4\" "
                          "stroke-dasharray=\"3 3\""
                        : "stroke=\"#bbb\" stroke-width=\"1.4\"");
      }
    }
  }

  const bool markers_only = log.rows() <= 2;
  for (int a = 0; a <= n; ++a) {
    const std::string color = a == 0 ? "#000000" : kPalette[(a - 1) % 8];
    if (!markers_only) canvas.polyline(*xcols[a], *ycols[a], color, a == 0);
    for (std::size_t k = markers_only ? 0 : xcols[a]->size() - 1;
         k < xcols[a]->size(); ++k) {
      if (a == 0)
        canvas.square((*xcols[a])[k], (*ycols[a])[k], 4.5, color, "none");
      else
        canvas.circle((*xcols[a])[k], (*ycols[a])[k], 3.5, color, "none");
    }
    if (a == 0)
      canvas.square(x0(a), y0(a), 4.5, "white", "#000000");
    else
      canvas.circle(x0(a), y0(a), 3.5, "white", kPalette[(a - 1) % 8]);
    canvas.legend_entry(a, color, a == 0,
                        a == 0 ? "leader" : "follower " + std::to_string(a));
  }
  canvas.save(path);
}

void plot_velocity_error(const CsvTable& log,
                         const std::filesystem::path& path) {
  const int n = follower_count(log);
  const auto& t = log.columns[log.col("t")];
  std::vector<const std::vector<double>*> series;
  for (int i = 1; i <= n; ++i)
    series.push_back(&log.columns[log.col("velerr_" + std::to_string(i))]);
  Range xr{t.front(), t.back()};
  if (xr.hi <= xr.lo) xr.hi = xr.lo + 1.0;
  Range yr = range_of(series);
  yr.lo = std::min(0.0, yr.lo);
  yr.pad(0.05);
  Canvas canvas(xr, yr);
  canvas.axes("t [s]", "velocity error [m/s]",
              "follower velocity error against the leader");
  const bool markers_only = log.rows() <= 2;
  for (int i = 0; i < n; ++i) {
    const std::string color = kPalette[i % 8];
    if (!markers_only) canvas.polyline(t, *series[i], color, false);
    if (markers_only)
      for (std::size_t k = 0; k < t.size(); ++k)
        canvas.circle(t[k], (*series[i])[k], 3.0, color, "none");
    canvas.legend_entry(i, color, false, "follower " + std::to_string(i + 1));
  }
  canvas.save(path);
}

}  // namespace

void emit_plot(const CsvTable& log, const std::filesystem::path& path,
               PlotKind kind, double edge_overlay_radius) {
  if (log.rows() == 0) throw ConfigError("emit_plot: log has no samples");
  if (kind == PlotKind::TrajectoryXY)
    plot_trajectory(log, path, edge_overlay_radius);
  else
    plot_velocity_error(log, path);
}

}  // namespace flocksim
