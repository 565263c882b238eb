// Copyright 2026 The loadplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace loadplan::detail {
namespace {

constexpr double kPanelW = 420.0;
constexpr double kPanelH = 300.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 16.0;
constexpr double kTop = 34.0;
constexpr double kBottom = 46.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// "Nice" tick step for a range split into about n intervals.
double nice_step(double range, int n) {
  if (!(range > 0.0)) return 1.0;
  const double raw = range / n;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

struct Frame {
  double ox;
  double oy;
  double x0, x1, y0, y1;

  double px(double x) const {
    return ox + kLeft + (x - x0) / (x1 - x0) * (kPanelW - kLeft - kRight);
  }
  double py(double y) const {
    return oy + kPanelH - kBottom - (y - y0) / (y1 - y0) * (kPanelH - kTop - kBottom);
  }
};

void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double c = lo;
    const double d = std::abs(c) > 0.0 ? 0.05 * std::abs(c) : 1.0;
    lo = c - d;
    hi = c + d;
  }
}

void axes(std::ostringstream& os, const Frame& f, const std::string& title,
          const std::string& xl, const std::string& yl, bool x_ticks) {
  os << "<text x=\"" << num(f.ox + kPanelW / 2) << "\" y=\"" << num(f.oy + 20)
     << "\" style=\"font:bold 13px sans-serif;text-anchor:middle\">"
     << xml_escape(title) << "</text>\n";
  const double left = f.px(f.x0);
  const double right = f.px(f.x1);
  const double top = f.py(f.y1);
  const double bottom = f.py(f.y0);
  os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\""
     << num(right - left) << "\" height=\"" << num(bottom - top)
     << "\" style=\"fill:none;stroke:#444;stroke-width:1\"/>\n";
  const double ys = nice_step(f.y1 - f.y0, 5);
  for (double y = std::ceil(f.y0 / ys) * ys; y <= f.y1 + 1e-9 * ys; y += ys) {
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(f.py(y)) << "\" x2=\""
       << num(right) << "\" y2=\"" << num(f.py(y))
       << "\" style=\"stroke:#ddd;stroke-width:1\"/>\n";
    os << "<text x=\"" << num(left - 4) << "\" y=\"" << num(f.py(y) + 4)
       << "\" style=\"font:10px sans-serif;text-anchor:end\">" << tick_label(y)
       << "</text>\n";
  }
  if (x_ticks) {
    const double xs = nice_step(f.x1 - f.x0, 6);
    for (double x = std::ceil(f.x0 / xs) * xs; x <= f.x1 + 1e-9 * xs; x += xs) {
      os << "<text x=\"" << num(f.px(x)) << "\" y=\"" << num(bottom + 14)
         << "\" style=\"font:10px sans-serif;text-anchor:middle\">"
         << tick_label(x) << "</text>\n";
    }
  }
  os << "<text x=\"" << num((left + right) / 2) << "\" y=\"" << num(bottom + 32)
     << "\" style=\"font:11px sans-serif;text-anchor:middle\">" << xml_escape(xl)
     << "</text>\n";
  const double ymid = (top + bottom) / 2;
  os << "<text x=\"" << num(f.ox + 14) << "\" y=\"" << num(ymid)
     << "\" transform=\"rotate(-90 " << num(f.ox + 14) << ' ' << num(ymid)
     << ")\" style=\"font:11px sans-serif;text-anchor:middle\">" << xml_escape(yl)
     << "</text>\n";
}

std::string open_svg(std::size_t panels, int columns) {
  const int cols = std::max(1, columns);
  const std::size_t rows = (panels + cols - 1) / cols;
  const double w = kPanelW * std::min<std::size_t>(panels, cols);
  const double h = kPanelH * std::max<std::size_t>(rows, 1);
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w)
     << "\" height=\"" << num(h) << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h)
     << "\">\n<rect x=\"0\" y=\"0\" width=\"" << num(w) << "\" height=\"" << num(h)
     << "\" style=\"fill:#fff\"/>\n";
  return os.str();
}

}  // namespace

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_lines(const std::vector<LinePanel>& panels, int columns) {
  std::ostringstream os;
  os << open_svg(panels.size(), columns);
  const int cols = std::max(1, columns);
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const LinePanel& panel = panels[p];
    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const Series& s : panel.series) {
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        const double e = k < s.err.size() ? s.err[k] : 0.0;
        x0 = std::min(x0, s.x[k]);
        x1 = std::max(x1, s.x[k]);
        y0 = std::min(y0, s.y[k] - e);
        y1 = std::max(y1, s.y[k] + e);
      }
    }
    if (!std::isfinite(x0)) {
      x0 = 0.0;
      x1 = 1.0;
      y0 = 0.0;
      y1 = 1.0;
    }
    pad_range(x0, x1);
    pad_range(y0, y1);
    const double margin = 0.05 * (y1 - y0);
    Frame f{kPanelW * static_cast<double>(p % cols),
            kPanelH * static_cast<double>(p / cols), x0, x1, y0 - margin, y1 + margin};
    axes(os, f, panel.title, panel.x_label, panel.y_label, true);
    double legend_y = f.py(f.y1) + 14;
    for (const Series& s : panel.series) {
      os << "<polyline style=\"fill:none;stroke:" << s.color
         << ";stroke-width:2\" points=\"";
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        os << (k ? " " : "") << num(f.px(s.x[k])) << ',' << num(f.py(s.y[k]));
      }
      os << "\"/>\n";
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        os << "<circle cx=\"" << num(f.px(s.x[k])) << "\" cy=\"" << num(f.py(s.y[k]))
           << "\" r=\"3\" style=\"fill:" << s.color << "\"/>\n";
        if (k < s.err.size() && s.err[k] > 0.0) {
          os << "<line x1=\"" << num(f.px(s.x[k])) << "\" y1=\""
             << num(f.py(s.y[k] - s.err[k])) << "\" x2=\"" << num(f.px(s.x[k]))
             << "\" y2=\"" << num(f.py(s.y[k] + s.err[k])) << "\" style=\"stroke:"
             << s.color << ";stroke-width:1\"/>\n";
        }
      }
      if (!s.name.empty()) {
        const double lx = f.px(f.x1) - 110;
        os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(legend_y - 4)
           << "\" x2=\"" << num(lx + 16) << "\" y2=\"" << num(legend_y - 4)
           << "\" style=\"stroke:" << s.color << ";stroke-width:2\"/>\n"
           << "<text x=\"" << num(lx + 20) << "\" y=\"" << num(legend_y)
           << "\" style=\"font:10px sans-serif\">" << xml_escape(s.name) << "</text>\n";
        legend_y += 14;
      }
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_stacked(const std::vector<StackedPanel>& panels, int columns) {
  std::ostringstream os;
  os << open_svg(panels.size(), columns);
  const int cols = std::max(1, columns);
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const StackedPanel& panel = panels[p];
    const std::size_t bars = panel.values.size();
    double top = 0.0;
    for (const auto& bar : panel.values) {
      double sum = 0.0;
      for (double v : bar) sum += std::max(0.0, v);
      top = std::max(top, sum);
    }
    if (!(top > 0.0)) top = 1.0;
    Frame f{kPanelW * static_cast<double>(p % cols),
            kPanelH * static_cast<double>(p / cols), 0.0,
            static_cast<double>(std::max<std::size_t>(bars, 1)), 0.0, 1.1 * top};
    axes(os, f, panel.title, panel.x_label, panel.y_label, false);
    const double slot = f.px(1.0) - f.px(0.0);
    for (std::size_t b = 0; b < bars; ++b) {
      double base = 0.0;
      for (std::size_t l = 0; l < panel.values[b].size(); ++l) {
        const double v = std::max(0.0, panel.values[b][l]);
        const double y_top = f.py(base + v);
        const double y_bottom = f.py(base);
        const std::string& color =
            l < panel.layer_colors.size() ? panel.layer_colors[l] : std::string("#888");
        os << "<rect x=\"" << num(f.px(static_cast<double>(b)) + 0.15 * slot)
           << "\" y=\"" << num(y_top) << "\" width=\"" << num(0.7 * slot)
           << "\" height=\"" << num(y_bottom - y_top) << "\" style=\"fill:" << color
           << "\"/>\n";
        base += v;
      }
      if (b < panel.bar_labels.size() &&
          (bars <= 16 || b % ((bars + 15) / 16) == 0)) {
        os << "<text x=\"" << num(f.px(b + 0.5)) << "\" y=\"" << num(f.py(0.0) + 14)
           << "\" style=\"font:10px sans-serif;text-anchor:middle\">"
           << xml_escape(panel.bar_labels[b]) << "</text>\n";
      }
    }
    double legend_y = f.py(f.y1) + 14;
    for (std::size_t l = 0; l < panel.layer_names.size(); ++l) {
      const double lx = f.px(f.x1) - 100;
      const std::string& color =
          l < panel.layer_colors.size() ? panel.layer_colors[l] : std::string("#888");
      os << "<rect x=\"" << num(lx) << "\" y=\"" << num(legend_y - 9)
         << "\" width=\"10\" height=\"10\" style=\"fill:" << color << "\"/>\n"
         << "<text x=\"" << num(lx + 14) << "\" y=\"" << num(legend_y)
         << "\" style=\"font:10px sans-serif\">" << xml_escape(panel.layer_names[l])
         << "</text>\n";
      legend_y += 14;
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace loadplan::detail
