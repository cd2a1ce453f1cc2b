// Copyright 2026 The MEML Authors.
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

#include "meml/io/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace meml::io {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                 "#ff7f0e", "#9467bd", "#8c564b"};

std::string fixed(double v, int digits = 2) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
  return std::string(buf, r.ptr);
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

// 1, 2 or 5 times a power of ten, at least `raw`.
double nice_step(double raw) {
  if (!(raw > 0.0)) return 1.0;
  const double base = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * base >= raw) return m * base;
  }
  return 10.0 * base;
}

}  // namespace

std::string render_regret_chart(const TransferRegretEstimate& estimate, const std::string& title) {
  std::size_t horizon = 1;
  double y_max = 0.0;
  for (const auto& c : estimate.curves) {
    horizon = std::max(horizon, c.mean.size());
    for (std::size_t t = 0; t < c.mean.size(); ++t) y_max = std::max(y_max, c.mean[t] + c.stddev[t]);
  }
  const double y_step = nice_step(std::max(y_max, 1e-9) / 5.0);
  const double y_top = y_step * std::max(1.0, std::ceil(y_max / y_step));
  const double x_step = nice_step(static_cast<double>(horizon) / 7.0);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double round) {
    return kLeft + (horizon > 1 ? (round - 1.0) / (horizon - 1.0) : 0.0) * plot_w;
  };
  auto py = [&](double v) { return kTop + plot_h * (1.0 - std::clamp(v / y_top, 0.0, 1.0)); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0) << "\" height=\""
      << fixed(kHeight, 0) << "\" viewBox=\"0 0 " << fixed(kWidth, 0) << ' ' << fixed(kHeight, 0)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-size=\"14\">" << escape(title) << "</text>\n";

  // Grid and y ticks.
  for (double v = 0.0; v <= y_top + 1e-9 * y_top; v += y_step) {
    const std::string y = fixed(py(v));
    svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << y << "\" x2=\"" << fixed(kLeft + plot_w)
        << "\" y2=\"" << y << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << fixed(kLeft - 6) << "\" y=\"" << fixed(py(v) + 4)
        << "\" text-anchor=\"end\">" << fixed(v, y_step < 1.0 ? 2 : 0) << "</text>\n";
  }
  for (double r = 0.0; r <= static_cast<double>(horizon); r += x_step) {
    const double round = std::max(1.0, r);
    svg << "<text x=\"" << fixed(px(round)) << "\" y=\"" << fixed(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << fixed(round, 0) << "</text>\n";
  }
  svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop + plot_h) << "\" x2=\""
      << fixed(kLeft + plot_w) << "\" y2=\"" << fixed(kTop + plot_h) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(kLeft)
      << "\" y2=\"" << fixed(kTop + plot_h) << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 12)
      << "\" text-anchor=\"middle\">round</text>\n";
  svg << "<text transform=\"translate(18 " << fixed(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">transfer regret</text>\n";

  for (std::size_t i = 0; i < estimate.curves.size(); ++i) {
    const PolicyCurve& c = estimate.curves[i];
    const char* color = kPalette[i % kPalette.size()];
    if (c.mean.empty()) continue;

    svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
    for (std::size_t t = 0; t < c.mean.size(); ++t) {
      svg << fixed(px(t + 1.0)) << ',' << fixed(py(c.mean[t] + c.stddev[t])) << ' ';
    }
    for (std::size_t t = c.mean.size(); t-- > 0;) {
      svg << fixed(px(t + 1.0)) << ',' << fixed(py(std::max(0.0, c.mean[t] - c.stddev[t]))) << ' ';
    }
    svg << "\"/>\n";

    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t t = 0; t < c.mean.size(); ++t) {
      svg << fixed(px(t + 1.0)) << ',' << fixed(py(c.mean[t])) << (t + 1 < c.mean.size() ? " " : "");
    }
    svg << "\"/>\n";

    const double ly = kTop + 10.0 + 20.0 * i;
    const double lx = kLeft + plot_w + 16.0;
    svg << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 24)
        << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fixed(lx + 30) << "\" y=\"" << fixed(ly + 4) << "\">"
        << escape(policy_label(c.policy)) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace meml::io
