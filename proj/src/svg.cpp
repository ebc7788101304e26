#include "costid/svg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace costid {

namespace {

constexpr int kCell = 24;      // cell edge in px
constexpr int kLeft = 46;      // left margin (row labels)
constexpr int kTop = 34;       // top margin (title)
constexpr int kBarGap = 18;    // gap between grid and color bar
constexpr int kBarWidth = 14;
constexpr int kBottom = 26;    // bottom margin (column labels)
constexpr int kRight = 58;     // right margin (bar labels)

// White (low) to dark blue (high).
void ramp(double t, int& r, int& g, int& b) {
  t = std::clamp(t, 0.0, 1.0);
  r = static_cast<int>(std::lround(255.0 + t * (8.0 - 255.0)));
  g = static_cast<int>(std::lround(255.0 + t * (48.0 - 255.0)));
  b = static_cast<int>(std::lround(255.0 + t * (107.0 - 255.0)));
}

std::string rect(int x, int y, int w, int h, int r, int g, int b) {
  return "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
         "\" width=\"" + std::to_string(w) + "\" height=\"" + std::to_string(h) +
         "\" fill=\"rgb(" + std::to_string(r) + ',' + std::to_string(g) + ',' +
         std::to_string(b) + ")\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
}

std::string text(int x, int y, const std::string& s, int size,
                 const char* anchor) {
  return "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
         "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) +
         "\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

// Fixed two-decimal rendering for scale labels (locale-independent).
std::string two_dec(double v) {
  const long cents = std::lround(v * 100.0);
  const long whole = cents / 100;
  long frac = cents % 100;
  if (frac < 0) frac = -frac;
  std::string s = std::to_string(whole) + '.';
  if (frac < 10) s += '0';
  s += std::to_string(frac);
  if (v < 0 && whole == 0) s.insert(s.begin(), '-');
  return s;
}

}  // namespace

std::string heatmap_svg(const Mat& values, const std::string& title,
                        double vmin, double vmax) {
  const int J = values.rows;
  const int K = values.cols;
  const double span = (vmax > vmin) ? (vmax - vmin) : 1.0;
  const int grid_w = K * kCell;
  const int grid_h = J * kCell;
  const int width = kLeft + grid_w + kBarGap + kBarWidth + kRight;
  const int height = kTop + grid_h + kBottom;

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
       std::to_string(width) + "\" height=\"" + std::to_string(height) +
       "\" viewBox=\"0 0 " + std::to_string(width) + ' ' +
       std::to_string(height) + "\">\n";
  s += rect(0, 0, width, height, 255, 255, 255);
  s += text(kLeft + grid_w / 2, 20, escape(title), 13, "middle");

  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < K; ++k) {
      int r, g, b;
      ramp((values(j, k) - vmin) / span, r, g, b);
      s += rect(kLeft + k * kCell, kTop + j * kCell, kCell, kCell, r, g, b);
    }
    s += text(kLeft - 6, kTop + j * kCell + kCell / 2 + 4,
              std::to_string(j + 1), 11, "end");
  }
  for (int k = 0; k < K; ++k) {
    s += text(kLeft + k * kCell + kCell / 2, kTop + grid_h + 16,
              std::to_string(k + 1), 11, "middle");
  }

  // Color bar: sampled in 32 bands, high values on top.
  const int bar_x = kLeft + grid_w + kBarGap;
  const int bands = 32;
  for (int i = 0; i < bands; ++i) {
    const double t = 1.0 - (static_cast<double>(i) + 0.5) / bands;
    int r, g, b;
    ramp(t, r, g, b);
    const int y0 = kTop + (i * grid_h) / bands;
    const int y1 = kTop + ((i + 1) * grid_h) / bands;
    s += rect(bar_x, y0, kBarWidth, y1 - y0, r, g, b);
  }
  s += text(bar_x + kBarWidth + 4, kTop + 10, two_dec(vmax), 10, "start");
  s += text(bar_x + kBarWidth + 4, kTop + grid_h, two_dec(vmin), 10, "start");

  s += "</svg>\n";
  return s;
}

}  // namespace costid
