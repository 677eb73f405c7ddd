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

// Standalone SVG contour plots of sweep grids.

#ifndef STEPBID_PLOT_HPP_
#define STEPBID_PLOT_HPP_

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "stepbid/sweep.hpp"

namespace stepbid {

// Values on a rectangular grid; z[i * ys.size() + j] sits at (xs[i], ys[j]).
// NaN marks a missing value.
struct Grid {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> z;

  double at(std::size_t i, std::size_t j) const { return z[i * ys.size() + j]; }
};

struct Segment {
  double x0, y0, x1, y1;
};

// Marching squares; saddle cells are resolved by the cell-centre average.
std::vector<Segment> contour_segments(const Grid& grid, double level);

// Heat map with `levels` evenly spaced contour lines and a colour bar.
void write_contour_svg(std::ostream& out, const Grid& grid, std::string_view title,
                       int levels = 10);

// Writes <prefix>_Es.svg, _Eb.svg, _Em.svg, _max.svg, _ratio_S_M.svg and
// _ratio_B_M.svg (those whose inputs are present). Returns the paths written.
std::vector<std::filesystem::path> write_sweep_plots(const std::vector<SweepRow>& rows,
                                                     const SweepSpec& spec,
                                                     const std::filesystem::path& prefix);

}  // namespace stepbid

#endif  // STEPBID_PLOT_HPP_
