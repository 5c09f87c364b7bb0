// Copyright 2026 The tomolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tomolab/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tomolab/error.hpp"

namespace tomolab::plot {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 450.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;
constexpr std::array<const char*, 8> kColors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
}

void begin(std::ostream& os, const Axes& axes, const Frame& f) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(axes.title)
     << "</text>\n";
  const double bottom = kHeight - kBottom;
  os << "<line x1=\"" << kLeft << "\" y1=\"" << bottom << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << bottom
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << bottom
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    os << "<text x=\"" << f.px(xv) << "\" y=\"" << bottom + 16 << "\" text-anchor=\"middle\">" << num(xv)
       << "</text>\n"
       << "<text x=\"" << kLeft - 6 << "\" y=\"" << f.py(yv) + 4 << "\" text-anchor=\"end\">" << num(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
     << escape(axes.xlabel) << "</text>\n"
     << "<text transform=\"translate(16," << kHeight / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(axes.ylabel) << "</text>\n";
}

void polyline(std::ostream& os, const Frame& f, const Series& s, const char* color) {
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
    os << f.px(s.x[i]) << ',' << f.py(s.y[i]) << ' ';
  }
  os << "\"/>\n";
}

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

void write_lines(const std::filesystem::path& path, const Axes& axes, const std::vector<Series>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  widen(x0, x1);
  widen(y0, y1);
  const Frame f{x0, x1, y0, y1};
  std::ofstream out = open(path);
  begin(out, axes, f);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % kColors.size()];
    polyline(out, f, series[i], color);
    out << "<text x=\"" << kWidth - kRight - 4 << "\" y=\"" << kTop + 14 * (i + 1) << "\" text-anchor=\"end\" fill=\""
        << color << "\">" << escape(series[i].label) << "</text>\n";
  }
  out << "</svg>\n";
}

void write_histogram(const std::filesystem::path& path, const Axes& axes, const std::vector<double>& edges,
                     const std::vector<double>& heights, const Series& curve) {
  if (edges.size() != heights.size() + 1) throw DimensionMismatch("histogram needs one more edge than bars");
  double x0 = edges.front(), x1 = edges.back(), y0 = 0.0, y1 = 0.0;
  for (double h : heights) y1 = std::max(y1, h);
  for (double v : curve.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
  for (double v : curve.y) y1 = std::max(y1, v);
  widen(x0, x1);
  if (!(y1 > 0.0)) y1 = 1.0;
  const Frame f{x0, x1, y0, y1 * 1.05};
  std::ofstream out = open(path);
  begin(out, axes, f);
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const double left = f.px(edges[i]);
    const double top = f.py(heights[i]);
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << f.px(edges[i + 1]) - left << "\" height=\""
        << f.py(0.0) - top << "\" fill=\"#9ecae1\" stroke=\"#3182bd\"/>\n";
  }
  if (!curve.x.empty()) {
    polyline(out, f, curve, kColors[1]);
    out << "<text x=\"" << kWidth - kRight - 4 << "\" y=\"" << kTop + 14 << "\" text-anchor=\"end\" fill=\""
        << kColors[1] << "\">" << escape(curve.label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace tomolab::plot
