#pragma once

#include <string>
#include <vector>

namespace rigaspec {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// One set of axes. Points that cannot be drawn (non-finite, or non-positive
/// on a log axis) are skipped and split the polyline.
struct PlotPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

/// Panels stacked vertically in one SVG 1.1 document.
std::string render_plot(const std::vector<PlotPanel>& panels, int width = 720, int panel_height = 360);

/// Cell (r, c) of a rows x cols grid, drawn with row 0 at the bottom. NaN
/// cells stay blank; the colour scale spans the finite values.
struct Heatmap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string scale_label;
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major
};

std::string render_heatmap(const Heatmap& map, int width = 600, int height = 560);

}  // namespace rigaspec
