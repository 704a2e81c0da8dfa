#include "rigaspec/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "rigaspec/error.hpp"

namespace rigaspec {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle", int size = 12,
                 const std::string& extra = "") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + std::to_string(size) +
         "\" text-anchor=\"" + anchor + "\"" + extra + ">" + escape(s) + "</text>\n";
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v) const {
    const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
    return t;
  }
  bool drawable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

Axis make_axis(const std::vector<const std::vector<double>*>& data, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* d : data) {
    for (double v : *d) {
      if (!std::isfinite(v) || (log && v <= 0.0)) continue;
      const double w = log ? std::log10(v) : v;
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
  }
  Axis a;
  a.log = log;
  if (!std::isfinite(lo)) return a;
  if (log) {
    lo = std::floor(lo);
    hi = std::ceil(hi);
    if (hi <= lo) hi = lo + 1.0;
  } else if (hi <= lo) {
    const double pad = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
    lo -= pad;
    hi += pad;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

std::vector<double> ticks(const Axis& a) {
  std::vector<double> t;
  if (a.log) {
    const int decades = static_cast<int>(a.hi - a.lo);
    const int step = std::max(1, decades / 8);
    for (int e = static_cast<int>(a.lo); e <= static_cast<int>(a.hi); e += step) t.push_back(std::pow(10.0, e));
    return t;
  }
  const double raw = (a.hi - a.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-9 * step; v += step) t.push_back(v);
  return t;
}

std::string header(int width, int height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
         " " + std::to_string(height) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::string render_plot(const std::vector<PlotPanel>& panels, int width, int panel_height) {
  if (panels.empty() || width < 200 || panel_height < 150) {
    throw Error(ErrorCode::InvalidArgument, "plot needs at least one panel and a sensible size");
  }
  const int height = panel_height * static_cast<int>(panels.size());
  std::string svg = header(width, height);
  const double left = 80, right = 20, top = 36, bottom = 52;

  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const PlotPanel& panel = panels[pi];
    const double y0 = static_cast<double>(pi) * panel_height;
    const double pw = width - left - right, ph = panel_height - top - bottom;
    std::vector<const std::vector<double>*> xs, ys;
    for (const auto& s : panel.series) {
      xs.push_back(&s.x);
      ys.push_back(&s.y);
    }
    const Axis ax = make_axis(xs, panel.log_x);
    const Axis ay = make_axis(ys, panel.log_y);
    auto px = [&](double v) { return left + ax.map(v) * pw; };
    auto py = [&](double v) { return y0 + top + (1.0 - ay.map(v)) * ph; };

    svg += "<g class=\"panel\">\n";
    svg += text(left + pw / 2, y0 + 22, panel.title, "middle", 14);
    svg += "<rect class=\"frame\" x=\"" + num(left) + "\" y=\"" + num(y0 + top) + "\" width=\"" + num(pw) +
           "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ticks(ax)) {
      const double x = px(t);
      svg += "<line class=\"tick\" x1=\"" + num(x) + "\" y1=\"" + num(y0 + top + ph) + "\" x2=\"" + num(x) +
             "\" y2=\"" + num(y0 + top + ph + 5) + "\" stroke=\"black\"/>\n";
      svg += text(x, y0 + top + ph + 18, tick_label(t), "middle", 10);
    }
    for (double t : ticks(ay)) {
      const double y = py(t);
      svg += "<line class=\"tick\" x1=\"" + num(left - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(left) +
             "\" y2=\"" + num(y) + "\" stroke=\"black\"/>\n";
      svg += text(left - 8, y + 3, tick_label(t), "end", 10);
    }
    svg += text(left + pw / 2, y0 + panel_height - 12, panel.x_label);
    const double ly = y0 + top + ph / 2;
    svg += text(16, ly, panel.y_label, "middle", 12, " transform=\"rotate(-90 16 " + num(ly) + ")\"");

    for (std::size_t si = 0; si < panel.series.size(); ++si) {
      const PlotSeries& s = panel.series[si];
      const char* colour = kPalette[si % kPalette.size()];
      std::string pts;
      auto flush = [&] {
        if (!pts.empty()) {
          svg += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.2\" points=\"" +
                 pts + "\"/>\n";
        }
        pts.clear();
      };
      const std::size_t n = std::min(s.x.size(), s.y.size());
      for (std::size_t k = 0; k < n; ++k) {
        if (!ax.drawable(s.x[k]) || !ay.drawable(s.y[k])) {
          flush();
          continue;
        }
        if (!pts.empty()) pts += ' ';
        pts += num(px(s.x[k])) + "," + num(py(s.y[k]));
      }
      flush();
      const double lx = left + pw - 150, lyy = y0 + top + 14 + 16 * static_cast<double>(si);
      svg += "<line class=\"legend\" x1=\"" + num(lx) + "\" y1=\"" + num(lyy) + "\" x2=\"" + num(lx + 20) +
             "\" y2=\"" + num(lyy) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
      svg += text(lx + 26, lyy + 4, s.label, "start", 11);
    }
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_heatmap(const Heatmap& map, int width, int height) {
  if (map.rows <= 0 || map.cols <= 0 || map.values.size() != static_cast<std::size_t>(map.rows) * map.cols) {
    throw Error(ErrorCode::InvalidArgument, "heatmap grid does not match its values");
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : map.values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi <= lo) hi = lo + 1.0;

  // Three-stop purple-teal-yellow ramp.
  auto colour = [&](double v) {
    constexpr double stops[3][3] = {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}};
    const double t = 2.0 * std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
    const int seg = t < 1.0 ? 0 : 1;
    const double u = t - seg;
    int rgb[3];
    for (int k = 0; k < 3; ++k) rgb[k] = static_cast<int>(std::lround(stops[seg][k] + u * (stops[seg + 1][k] - stops[seg][k])));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return std::string(buf);
  };

  const double left = 70, right = 110, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  const double cw = pw / map.cols, ch = ph / map.rows;
  std::string svg = header(width, height);
  svg += text(left + pw / 2, 24, map.title, "middle", 14);
  svg += "<g class=\"cells\">\n";
  for (int r = 0; r < map.rows; ++r) {
    for (int c = 0; c < map.cols; ++c) {
      const double v = map.values[static_cast<std::size_t>(r) * map.cols + c];
      if (!std::isfinite(v)) continue;
      svg += "<rect x=\"" + num(left + c * cw) + "\" y=\"" + num(top + (map.rows - 1 - r) * ch) + "\" width=\"" +
             num(cw) + "\" height=\"" + num(ch) + "\" fill=\"" + colour(v) + "\"/>\n";
    }
  }
  svg += "</g>\n";
  svg += "<rect class=\"frame\" x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" +
         num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += text(left + pw / 2, height - 14, map.x_label);
  svg += text(18, top + ph / 2, map.y_label, "middle", 12,
              " transform=\"rotate(-90 18 " + num(top + ph / 2) + ")\"");
  svg += text(left, top + ph + 16, "1", "middle", 10);
  svg += text(left + pw, top + ph + 16, std::to_string(map.cols), "middle", 10);
  svg += text(left - 8, top + ph, "1", "end", 10);
  svg += text(left - 8, top + 8, std::to_string(map.rows), "end", 10);

  // Colour bar.
  const double bx = left + pw + 24, bw = 18;
  constexpr int steps = 32;
  for (int s = 0; s < steps; ++s) {
    const double v = lo + (hi - lo) * (s + 0.5) / steps;
    svg += "<rect class=\"bar\" x=\"" + num(bx) + "\" y=\"" + num(top + ph * (1.0 - (s + 1.0) / steps)) +
           "\" width=\"" + num(bw) + "\" height=\"" + num(ph / steps + 0.5) + "\" fill=\"" + colour(v) + "\"/>\n";
  }
  svg += text(bx + bw + 4, top + ph, tick_label(lo), "start", 10);
  svg += text(bx + bw + 4, top + 8, tick_label(hi), "start", 10);
  svg += text(bx + bw / 2, top - 8, map.scale_label, "middle", 10);
  svg += "</svg>\n";
  return svg;
}

}  // namespace rigaspec
