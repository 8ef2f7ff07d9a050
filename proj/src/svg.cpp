#include "tc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace tc {

namespace {

constexpr double kWidth = 960.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;

struct Panel {
  double top, bottom;  // pixel range
  double lo, hi;       // value range
  double y(double v) const {
    return bottom - (v - lo) / (hi - lo) * (bottom - top);
  }
};

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

std::string escape_text(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch; break;
    }
  }
  return out;
}

double x_at(int i, int count) {
  if (count <= 1) return kLeft;
  return kLeft + (kWidth - kLeft - kRight) * i / (count - 1);
}

void value_range(const Vec& v, double& lo, double& hi) {
  for (int i = 0; i < v.size(); ++i) {
    if (is_missing(v[i])) continue;
    lo = std::min(lo, v[i]);
    hi = std::max(hi, v[i]);
  }
}

Panel make_panel(double top, double bottom, double lo, double hi) {
  if (!(lo < hi)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  return Panel{top, bottom, lo - pad, hi + pad};
}

void emit_polyline(std::string& out, const Vec& v, const Panel& panel,
                   const std::string& color, double width) {
  const int n = static_cast<int>(v.size());
  std::string points;
  auto flush = [&]() {
    if (points.empty()) return;
    out += "  <polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
           num(width) + "\" points=\"" + points + "\"/>\n";
    points.clear();
  };
  for (int i = 0; i < n; ++i) {
    if (is_missing(v[i])) {
      flush();
      continue;
    }
    points += num(x_at(i, n)) + "," + num(panel.y(v[i])) + " ";
  }
  flush();
}

void emit_axes(std::string& out, const Panel& panel,
               const std::vector<std::string>& dates, bool with_x_labels) {
  out += "  <rect x=\"" + num(kLeft) + "\" y=\"" + num(panel.top) + "\" width=\"" +
         num(kWidth - kLeft - kRight) + "\" height=\"" + num(panel.bottom - panel.top) +
         "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  for (int j = 0; j <= 4; ++j) {
    const double v = panel.lo + (panel.hi - panel.lo) * j / 4.0;
    const double y = panel.y(v);
    out += "  <line x1=\"" + num(kLeft - 4) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(kLeft) + "\" y2=\"" + num(y) + "\" stroke=\"#333333\"/>\n";
    out += "  <text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) +
           "\" text-anchor=\"end\" font-size=\"12\">" + tick_label(v) + "</text>\n";
  }
  if (!with_x_labels) return;
  const int n = static_cast<int>(dates.size());
  const int ticks = std::min(8, std::max(2, n));
  for (int j = 0; j < ticks; ++j) {
    const int i = static_cast<int>(std::lround(
        static_cast<double>(j) * (n - 1) / (ticks - 1)));
    const double x = x_at(i, n);
    out += "  <line x1=\"" + num(x) + "\" y1=\"" + num(panel.bottom) + "\" x2=\"" +
           num(x) + "\" y2=\"" + num(panel.bottom + 4) + "\" stroke=\"#333333\"/>\n";
    out += "  <text x=\"" + num(x) + "\" y=\"" + num(panel.bottom + 18) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + escape_text(dates[i]) +
           "</text>\n";
  }
}

void emit_shading(std::string& out, const Panel& panel,
                  const std::vector<std::pair<int, int>>& shading, int count) {
  for (const auto& [from, to] : shading) {
    if (from < 0 || to < from || to >= count) continue;
    const double x0 = x_at(from, count);
    const double x1 = x_at(to, count);
    out += "  <rect x=\"" + num(x0) + "\" y=\"" + num(panel.top) + "\" width=\"" +
           num(std::max(1.0, x1 - x0)) + "\" height=\"" +
           num(panel.bottom - panel.top) + "\" fill=\"#cccccc\" opacity=\"0.45\"/>\n";
  }
}

}  // namespace

std::string render_two_panel_chart(const std::vector<std::string>& dates,
                                   const Vec& raw, const Vec& trend,
                                   const Vec& cycle,
                                   const std::vector<std::pair<int, int>>& shading,
                                   const std::string& title) {
  const int n = static_cast<int>(raw.size());
  if (trend.size() != n || cycle.size() != n ||
      static_cast<int>(dates.size()) != n)
    throw DimensionError("chart inputs must share one date axis");
  if (n < 2) throw InvalidLengthError("need at least 2 points to draw");

  double lo1 = std::numeric_limits<double>::infinity();
  double hi1 = -lo1;
  value_range(raw, lo1, hi1);
  value_range(trend, lo1, hi1);
  double lo2 = std::numeric_limits<double>::infinity();
  double hi2 = -lo2;
  value_range(cycle, lo2, hi2);

  const Panel top = make_panel(48.0, 320.0, lo1, hi1);
  const Panel bottom = make_panel(372.0, 600.0, lo2, hi2);

  std::string out;
  out +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      "viewBox=\"0 0 960 640\" font-family=\"sans-serif\">\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"960\" height=\"640\" fill=\"#ffffff\"/>\n";
  out += "  <text x=\"480\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">" +
         escape_text(title) + "</text>\n";

  emit_shading(out, top, shading, n);
  emit_shading(out, bottom, shading, n);
  emit_axes(out, top, dates, false);
  emit_axes(out, bottom, dates, true);

  emit_polyline(out, raw, top, "#888888", 1.0);
  emit_polyline(out, trend, top, "#c0392b", 1.8);
  if (bottom.lo < 0.0 && bottom.hi > 0.0) {
    const double y0 = bottom.y(0.0);
    out += "  <line x1=\"" + num(kLeft) + "\" y1=\"" + num(y0) + "\" x2=\"" +
           num(kWidth - kRight) + "\" y2=\"" + num(y0) +
           "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  }
  emit_polyline(out, cycle, bottom, "#2c6fbb", 1.2);

  out += "  <text x=\"" + num(kWidth - kRight) +
         "\" y=\"44\" text-anchor=\"end\" font-size=\"12\" fill=\"#888888\">raw"
         "</text>\n";
  out += "  <text x=\"" + num(kWidth - kRight - 44) +
         "\" y=\"44\" text-anchor=\"end\" font-size=\"12\" fill=\"#c0392b\">trend"
         "</text>\n";
  out += "  <text x=\"" + num(kWidth - kRight) +
         "\" y=\"368\" text-anchor=\"end\" font-size=\"12\" fill=\"#2c6fbb\">cycle"
         "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace tc
