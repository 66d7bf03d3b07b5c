#pragma once

// Minimal SVG line charts for 1-D sweeps.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace holoext {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string escape_xml(const std::string& s) {
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

}  // namespace detail

inline std::string line_chart_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                                  const std::vector<SvgSeries>& series) {
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-300) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  out += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" + detail::escape_xml(title) + "</text>\n";
  out += "<line x1=\"" + detail::fmt(L) + "\" y1=\"" + detail::fmt(H - B) + "\" x2=\"" + detail::fmt(W - R) + "\" y2=\"" + detail::fmt(H - B) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + detail::fmt(L) + "\" y1=\"" + detail::fmt(T) + "\" x2=\"" + detail::fmt(L) + "\" y2=\"" + detail::fmt(H - B) +
         "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    out += "<text x=\"" + detail::fmt(px(xv)) + "\" y=\"" + detail::fmt(H - B + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + detail::fmt(xv) + "</text>\n";
    out += "<text x=\"" + detail::fmt(L - 6) + "\" y=\"" + detail::fmt(py(yv) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + detail::fmt(yv) + "</text>\n";
  }
  out += "<text x=\"" + detail::fmt((L + W - R) / 2) + "\" y=\"" + detail::fmt(H - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + detail::escape_xml(xlabel) + "</text>\n";
  out += "<text x=\"16\" y=\"" + detail::fmt((T + H - B) / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
         detail::fmt((T + H - B) / 2) + ")\">" + detail::escape_xml(ylabel) + "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % 5];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      pts += detail::fmt(px(s.x[i])) + "," + detail::fmt(py(s.y[i])) + " ";
      out += "<circle cx=\"" + detail::fmt(px(s.x[i])) + "\" cy=\"" + detail::fmt(py(s.y[i])) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    out += "<text x=\"" + detail::fmt(W - R - 4) + "\" y=\"" + detail::fmt(T + 14 * (k + 1)) + "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" +
           color + "\">" + detail::escape_xml(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace holoext
