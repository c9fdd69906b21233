#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "fostab/errors.hpp"

namespace fostab::cli {

namespace {

constexpr double kWidth = 640.0, kHeight = 400.0, kPad = 40.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string polyline_svg(const std::vector<double>& x, const std::vector<std::vector<double>>& series,
                         const std::vector<std::string>& labels) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (double v : x) {
    if (!std::isfinite(v)) continue;
    x_lo = std::min(x_lo, v);
    x_hi = std::max(x_hi, v);
  }
  for (const auto& s : series)
    for (double v : s) {
      if (!std::isfinite(v)) continue;
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > y_lo)) {
    y_lo = std::isfinite(y_lo) ? y_lo - 1.0 : -1.0;
    y_hi = y_lo + 2.0;
  }
  auto px = [&](double v) { return kPad + (v - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kPad); };
  auto py = [&](double v) { return kHeight - kPad - (v - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kPad); };

  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                kWidth, kHeight, kWidth, kHeight);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.0f\" y=\"%.0f\" width=\"%.0f\" height=\"%.0f\" fill=\"none\" stroke=\"#888\"/>\n", kPad,
                kPad, kWidth - 2 * kPad, kHeight - 2 * kPad);
  out += buf;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    out += "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"";
    out += color;
    out += "\" points=\"";
    const std::size_t n = std::min(x.size(), series[s].size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(series[s][i])) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x[i]), py(series[s][i]));
      out += buf;
    }
    out += "\"/>\n";
    if (s < labels.size()) {
      std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.0f\" font-size=\"12\" fill=\"%s\">", kWidth - kPad + 4,
                    kPad + 14.0 * static_cast<double>(s + 1), color);
      out += buf;
      out += labels[s];
      out += "</text>\n";
    }
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.0f\" font-size=\"11\">%.4g .. %.4g</text>\n", kPad,
                kHeight - 12, x_lo, x_hi);
  out += buf;
  std::snprintf(buf, sizeof buf, "<text x=\"4\" y=\"%.0f\" font-size=\"11\">%.4g .. %.4g</text>\n", kPad - 8, y_lo,
                y_hi);
  out += buf;
  out += "</svg>\n";
  return out;
}

void write_svg(const std::string& path, const std::string& svg) {
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write " + path);
  f << svg;
}

}  // namespace fostab::cli
