// Copyright 2026 The hopfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "hopfilter/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

namespace hopfilter {

namespace {

constexpr double kPanelW = 420.0;
constexpr double kPanelH = 300.0;
constexpr double kLeft = 56.0;
constexpr double kRight = 16.0;
constexpr double kTop = 34.0;
constexpr double kBottom = 44.0;
// Ratios above this are clipped so the interesting band near 1 stays visible.
constexpr double kYCap = 3.0;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

struct Panel {
  double x0, y0;
  int l_min, l_max;
  double y_max;

  double px(double l) const {
    const double span = std::max(1, l_max - l_min);
    return x0 + kLeft + (l - l_min) / span * (kPanelW - kLeft - kRight);
  }
  double py(double v) const {
    v = std::clamp(v, 0.0, y_max);
    return y0 + kPanelH - kBottom - v / y_max * (kPanelH - kTop - kBottom);
  }
};

void polyline(std::string& out, const std::vector<std::pair<double, double>>& pts, const char* color,
              const char* dash) {
  if (pts.empty()) return;
  out += "<polyline fill=\"none\" stroke=\"";
  out += color;
  out += "\" stroke-width=\"2\"";
  if (dash[0] != '\0') {
    out += " stroke-dasharray=\"";
    out += dash;
    out += '"';
  }
  out += " points=\"";
  for (const auto& [x, y] : pts) out += fmt("%.2f", x) + "," + fmt("%.2f", y) + " ";
  out += "\"/>\n";
  for (const auto& [x, y] : pts) {
    out += "<circle cx=\"" + fmt("%.2f", x) + "\" cy=\"" + fmt("%.2f", y) + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
  }
}

}  // namespace

std::string sweep_svg(const SweepResult& result) {
  std::map<double, std::vector<const TradeoffPoint*>> rows;
  for (const auto& pt : result.points) rows[pt.p].push_back(&pt);
  const int panels = static_cast<int>(rows.size());
  const int cols = panels > 1 ? 2 : 1;
  const int grid_rows = (panels + cols - 1) / cols;
  const double width = cols * kPanelW;
  const double height = grid_rows * kPanelH + 30.0;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", width) + "\" height=\"" +
         fmt("%.0f", height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  int index = 0;
  for (const auto& [p, pts] : rows) {
    Panel panel{(index % cols) * kPanelW, (index / cols) * kPanelH, pts.front()->l, pts.back()->l, 1.2};
    for (const auto* pt : pts) {
      if (pt->upsilon_h) panel.y_max = std::max(panel.y_max, std::min(*pt->upsilon_h, kYCap) * 1.05);
    }
    const double left = panel.x0 + kLeft;
    const double right = panel.x0 + kPanelW - kRight;
    const double top = panel.y0 + kTop;
    const double bottom = panel.y0 + kPanelH - kBottom;

    out += "<text x=\"" + fmt("%.1f", (left + right) / 2) + "\" y=\"" + fmt("%.1f", panel.y0 + 20) +
           "\" text-anchor=\"middle\" font-weight=\"bold\">p = " + fmt("%g", p) + "</text>\n";
    out += "<rect x=\"" + fmt("%.1f", left) + "\" y=\"" + fmt("%.1f", top) + "\" width=\"" +
           fmt("%.1f", right - left) + "\" height=\"" + fmt("%.1f", bottom - top) +
           "\" fill=\"none\" stroke=\"#444\"/>\n";
    // Horizontal reference at 1 and y ticks.
    const double step = panel.y_max > 2.0 ? 0.5 : 0.2;
    for (double v = 0.0; v <= panel.y_max + 1e-12; v += step) {
      const double y = panel.py(v);
      out += "<line x1=\"" + fmt("%.1f", left) + "\" y1=\"" + fmt("%.2f", y) + "\" x2=\"" + fmt("%.1f", right) +
             "\" y2=\"" + fmt("%.2f", y) + "\" stroke=\"#e4e4e4\"/>\n";
      out += "<text x=\"" + fmt("%.1f", left - 6) + "\" y=\"" + fmt("%.2f", y + 4) + "\" text-anchor=\"end\">" +
             fmt("%.1f", v) + "</text>\n";
    }
    out += "<line x1=\"" + fmt("%.1f", left) + "\" y1=\"" + fmt("%.2f", panel.py(1.0)) + "\" x2=\"" +
           fmt("%.1f", right) + "\" y2=\"" + fmt("%.2f", panel.py(1.0)) + "\" stroke=\"#888\" stroke-dasharray=\"2 3\"/>\n";
    const int l_step = std::max(1, (panel.l_max - panel.l_min + 1) / 10);
    for (int l = panel.l_min; l <= panel.l_max; l += l_step) {
      out += "<text x=\"" + fmt("%.2f", panel.px(l)) + "\" y=\"" + fmt("%.1f", bottom + 16) +
             "\" text-anchor=\"middle\">" + std::to_string(l) + "</text>\n";
    }
    out += "<text x=\"" + fmt("%.1f", (left + right) / 2) + "\" y=\"" + fmt("%.1f", bottom + 34) +
           "\" text-anchor=\"middle\">L (max transmissions per hop)</text>\n";

    std::vector<std::pair<double, double>> uh, ue;
    for (const auto* pt : pts) {
      ue.emplace_back(panel.px(pt->l), panel.py(pt->upsilon_e));
      if (pt->upsilon_h) {
        uh.emplace_back(panel.px(pt->l), panel.py(*pt->upsilon_h));
      } else {
        polyline(out, uh, "#c0392b", "");
        uh.clear();
      }
    }
    polyline(out, uh, "#c0392b", "");
    polyline(out, ue, "#2c6fbb", "6 3");
    ++index;
  }
  const double ly = grid_rows * kPanelH + 18.0;
  out += "<line x1=\"20\" y1=\"" + fmt("%.1f", ly - 4) + "\" x2=\"50\" y2=\"" + fmt("%.1f", ly - 4) +
         "\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n";
  out += "<text x=\"56\" y=\"" + fmt("%.1f", ly) + "\">upsilon_h (norm ratio)</text>\n";
  out += "<line x1=\"220\" y1=\"" + fmt("%.1f", ly - 4) + "\" x2=\"250\" y2=\"" + fmt("%.1f", ly - 4) +
         "\" stroke=\"#2c6fbb\" stroke-width=\"2\" stroke-dasharray=\"6 3\"/>\n";
  out += "<text x=\"256\" y=\"" + fmt("%.1f", ly) + "\">upsilon_e (energy ratio)</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace hopfilter
