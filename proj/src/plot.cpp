// Copyright 2026 The stepbid Authors
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

#include "stepbid/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace stepbid {

namespace {

// Crossing point of `level` on the edge between two corner values.
double lerp_at(double a, double b, double level) {
  if (a == b) return 0.5;
  return (level - a) / (b - a);
}

}  // namespace

std::vector<Segment> contour_segments(const Grid& g, double level) {
  std::vector<Segment> out;
  if (g.xs.size() < 2 || g.ys.size() < 2) return out;
  for (std::size_t i = 0; i + 1 < g.xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < g.ys.size(); ++j) {
      // Corners counter-clockwise from (i, j).
      const std::array<double, 4> v = {g.at(i, j), g.at(i + 1, j), g.at(i + 1, j + 1),
                                       g.at(i, j + 1)};
      if (std::any_of(v.begin(), v.end(), [](double x) { return std::isnan(x); })) continue;
      const std::array<double, 4> cx = {g.xs[i], g.xs[i + 1], g.xs[i + 1], g.xs[i]};
      const std::array<double, 4> cy = {g.ys[j], g.ys[j], g.ys[j + 1], g.ys[j + 1]};
      int mask = 0;
      for (int k = 0; k < 4; ++k) {
        if (v[k] >= level) mask |= 1 << k;
      }
      if (mask == 0 || mask == 15) continue;

      auto edge_point = [&](int e) {
        const int a = e;
        const int b = (e + 1) % 4;
        const double t = lerp_at(v[a], v[b], level);
        return std::array<double, 2>{cx[a] + t * (cx[b] - cx[a]), cy[a] + t * (cy[b] - cy[a])};
      };
      // Edges whose endpoints straddle the level.
      std::vector<int> crossings;
      for (int e = 0; e < 4; ++e) {
        const bool a = (mask >> e) & 1;
        const bool b = (mask >> ((e + 1) % 4)) & 1;
        if (a != b) crossings.push_back(e);
      }
      if (crossings.size() == 2) {
        auto p = edge_point(crossings[0]);
        auto q = edge_point(crossings[1]);
        out.push_back({p[0], p[1], q[0], q[1]});
      } else if (crossings.size() == 4) {
        const double centre = (v[0] + v[1] + v[2] + v[3]) / 4.0;
        const bool centre_high = centre >= level;
        const bool corner0_high = mask & 1;
        // Pair edges so the segments separate the low corners from the centre
        // when it is high, and vice versa.
        std::array<std::pair<int, int>, 2> pairs =
            centre_high == corner0_high ? std::array<std::pair<int, int>, 2>{{{0, 1}, {2, 3}}}
                                        : std::array<std::pair<int, int>, 2>{{{3, 0}, {1, 2}}};
        for (const auto& [e0, e1] : pairs) {
          auto p = edge_point(e0);
          auto q = edge_point(e1);
          out.push_back({p[0], p[1], q[0], q[1]});
        }
      }
    }
  }
  return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kWidth = 560;
constexpr double kHeight = 460;
constexpr double kLeft = 70;
constexpr double kTop = 40;
constexpr double kPlotW = 380;
constexpr double kPlotH = 360;

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
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

std::string colour(double t) {
  // Viridis anchors.
  static constexpr std::array<std::array<double, 3>, 5> kAnchors = {{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37},
  }};
  t = std::clamp(t, 0.0, 1.0) * (kAnchors.size() - 1);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(t), kAnchors.size() - 2);
  const double f = t - static_cast<double>(k);
  std::ostringstream s;
  s << "rgb(";
  for (int c = 0; c < 3; ++c) {
    s << static_cast<int>(std::lround(kAnchors[k][c] + f * (kAnchors[k + 1][c] - kAnchors[k][c])));
    s << (c < 2 ? "," : ")");
  }
  return s.str();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

void write_contour_svg(std::ostream& out, const Grid& g, std::string_view title, int levels) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : g.z) {
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  const double span = hi > lo ? hi - lo : 1.0;
  const double x0 = g.xs.front();
  const double x1 = g.xs.back() > x0 ? g.xs.back() : x0 + 1.0;
  const double y0 = g.ys.front();
  const double y1 = g.ys.back() > y0 ? g.ys.back() : y0 + 1.0;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * kPlotW; };
  auto py = [&](double y) { return kTop + kPlotH - (y - y0) / (y1 - y0) * kPlotH; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(title) << "</text>\n";

  // Cells are centred on grid nodes.
  out << "<g shape-rendering=\"crispEdges\">\n";
  const std::size_t nx = g.xs.size();
  const std::size_t ny = g.ys.size();
  for (std::size_t i = 0; i < nx; ++i) {
    const double xa = i == 0 ? g.xs[0] : (g.xs[i - 1] + g.xs[i]) / 2;
    const double xb = i + 1 == nx ? g.xs[i] : (g.xs[i] + g.xs[i + 1]) / 2;
    for (std::size_t j = 0; j < ny; ++j) {
      const double v = g.at(i, j);
      if (std::isnan(v)) continue;
      const double ya = j == 0 ? g.ys[0] : (g.ys[j - 1] + g.ys[j]) / 2;
      const double yb = j + 1 == ny ? g.ys[j] : (g.ys[j] + g.ys[j + 1]) / 2;
      out << "<rect x=\"" << fmt(px(xa)) << "\" y=\"" << fmt(py(yb)) << "\" width=\""
          << fmt(std::max(px(xb) - px(xa), 0.5)) << "\" height=\""
          << fmt(std::max(py(ya) - py(yb), 0.5)) << "\" fill=\"" << colour((v - lo) / span)
          << "\"/>\n";
    }
  }
  out << "</g>\n";

  for (int k = 1; k <= levels; ++k) {
    const double level = lo + span * k / (levels + 1);
    const auto segments = contour_segments(g, level);
    if (segments.empty()) continue;
    out << "<path fill=\"none\" stroke=\"black\" stroke-width=\"0.8\" d=\"";
    for (const auto& s : segments) {
      out << "M" << fmt(px(s.x0)) << " " << fmt(py(s.y0)) << "L" << fmt(px(s.x1)) << " "
          << fmt(py(s.y1));
    }
    out << "\"><title>" << fmt(level) << "</title></path>\n";
  }

  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kPlotW << "\" height=\""
      << kPlotH << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = x0 + (x1 - x0) * k / 4;
    const double y = y0 + (y1 - y0) * k / 4;
    out << "<text x=\"" << fmt(px(x)) << "\" y=\"" << kTop + kPlotH + 16
        << "\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(py(y) + 4) << "\" text-anchor=\"end\">"
        << fmt(y) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"" << kTop + kPlotH + 34
      << "\" text-anchor=\"middle\">c_s</text>\n";
  out << "<text x=\"18\" y=\"" << kTop + kPlotH / 2 << "\" transform=\"rotate(-90 18 "
      << kTop + kPlotH / 2 << ")\" text-anchor=\"middle\">c_v</text>\n";

  const double bar_x = kLeft + kPlotW + 30;
  for (int k = 0; k < 100; ++k) {
    out << "<rect x=\"" << bar_x << "\" y=\"" << fmt(kTop + kPlotH * (99 - k) / 100.0)
        << "\" width=\"16\" height=\"" << fmt(kPlotH / 100.0 + 0.5) << "\" fill=\""
        << colour(k / 99.0) << "\"/>\n";
  }
  out << "<text x=\"" << bar_x + 20 << "\" y=\"" << kTop + 10 << "\">" << fmt(hi) << "</text>\n";
  out << "<text x=\"" << bar_x + 20 << "\" y=\"" << kTop + kPlotH << "\">" << fmt(lo)
      << "</text>\n";
  out << "</svg>\n";
}

std::vector<std::filesystem::path> write_sweep_plots(const std::vector<SweepRow>& rows,
                                                     const SweepSpec& spec,
                                                     const std::filesystem::path& prefix) {
  Grid base;
  for (const auto& v : spec.cs.values()) base.xs.push_back(to_double(v));
  for (const auto& v : spec.cv.values()) base.ys.push_back(to_double(v));
  if (rows.size() != base.xs.size() * base.ys.size()) {
    throw std::invalid_argument("sweep rows do not match the sweep grid");
  }
  auto optimum = [](BidFormat f) {
    return [f](const SweepRow& r) { return r.of(f) ? r.of(f)->value : kNaN; };
  };

  struct Plot {
    std::string suffix;
    std::string title;
    std::function<double(const SweepRow&)> value;
    bool enabled;
  };
  const bool s = spec.includes(BidFormat::kSimple);
  const bool b = spec.includes(BidFormat::kBlock);
  const bool m = spec.includes(BidFormat::kMultipart);
  const std::vector<Plot> plots = {
      {"Es", "Maximal expected profit, simple bidding", optimum(BidFormat::kSimple), s},
      {"Eb", "Maximal expected profit, block bidding", optimum(BidFormat::kBlock), b},
      {"Em", "Maximal expected profit, multi-part bidding", optimum(BidFormat::kMultipart), m},
      {"max", "Maximal expected profit over all formats",
       [](const SweepRow& r) {
         double best = -std::numeric_limits<double>::infinity();
         for (const auto& o : r.optimum) {
           if (o) best = std::max(best, o->value);
         }
         return best;
       },
       s && b && m},
      {"ratio_S_M", "Ratio E*_S / E*_M",
       [](const SweepRow& r) { return r.ratio_simple.value_or(kNaN); }, s && m},
      {"ratio_B_M", "Ratio E*_B / E*_M",
       [](const SweepRow& r) { return r.ratio_block.value_or(kNaN); }, b && m},
  };

  std::vector<std::filesystem::path> written;
  for (const auto& plot : plots) {
    if (!plot.enabled) continue;
    Grid g = base;
    g.z.reserve(rows.size());
    for (const auto& r : rows) g.z.push_back(plot.value(r));
    std::filesystem::path path = prefix;
    path += "_" + plot.suffix + ".svg";
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    write_contour_svg(file, g, plot.title);
    if (!file) throw std::runtime_error("failed writing " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace stepbid
