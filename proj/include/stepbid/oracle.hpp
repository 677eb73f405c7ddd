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

// Reference expected-profit computations that do not rely on any closed form:
// an exact integrator over polygonal acceptance regions and a Monte Carlo
// estimator. Both accept any StepDensity.

#ifndef STEPBID_ORACLE_HPP_
#define STEPBID_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "stepbid/distribution.hpp"
#include "stepbid/payoff.hpp"
#include "stepbid/rational.hpp"

namespace stepbid {

// x_coef * x + y_coef * y >= bound, with coefficients in {-1, 0, 1}.
// Strictness is irrelevant to integrals and is not tracked.
struct HalfPlane {
  int x_coef = 0;
  int y_coef = 0;
  Rational bound;

  bool contains(const Rational& x, const Rational& y) const {
    return x_coef * x + y_coef * y >= bound;
  }
};

// constant + x_coef * x + y_coef * y, with x_coef, y_coef in {0, 1}.
struct AffineIntegrand {
  Rational constant;
  int x_coef = 0;
  int y_coef = 0;
};

struct AcceptanceRegion {
  std::vector<HalfPlane> bounds;  // intersected with the unit square
  AffineIntegrand integrand;
};

using AcceptanceRegionSet = std::vector<AcceptanceRegion>;

struct Point {
  Rational x;
  Rational y;
  bool operator==(const Point&) const = default;
};

// Convex polygon, counter-clockwise.
using Polygon = std::vector<Point>;

Polygon rectangle(const Rational& x0, const Rational& x1, const Rational& y0,
                  const Rational& y1);

// Intersection of a convex polygon with a half-plane (exact).
Polygon clip(const Polygon& polygon, const HalfPlane& half_plane);

Rational area(const Polygon& polygon);

// Integral of the affine integrand over the polygon (exact, via a triangle
// fan: each triangle contributes area times the integrand at its centroid).
Rational integrate(const Polygon& polygon, const AffineIntegrand& integrand);

// One region per profit branch that can be nonzero.
AcceptanceRegionSet regions_for(const Bid& bid, const CostParams& cost);

// Sum over regions of the integral of integrand * rho(x) rho(y), computed by
// clipping each density cell against the region.
Rational exact_expected(const AcceptanceRegionSet& regions, const StepDensity& d);
Rational exact_expected(const Bid& bid, const CostParams& cost, const StepDensity& d);

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
};

// Mean and standard error of n i.i.d. profit draws. Draw i uses stream
// indices 2i and 2i+1 of CounterRng(seed); the index range is cut into fixed
// chunks that are reduced in order, so the result is identical for any
// worker count (0 means hardware concurrency). Throws std::invalid_argument
// if n == 0.
McEstimate mc_expected(const Bid& bid, const CostParams& cost, const StepDensity& d,
                       std::uint64_t n, std::uint64_t seed, unsigned workers = 0);

}  // namespace stepbid

#endif  // STEPBID_ORACLE_HPP_
