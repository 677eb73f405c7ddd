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

// Closed-form expected profits under the reference step density
// (heights 1/2, 3/2, 1/2 on [0,1/4), [1/4,3/4), [3/4,1)).
//
// Simple bidding is a three-piece quadratic in the common bid b on [0,1];
// block bidding is an eight-piece cubic in the threshold on [0,2];
// multi-part bidding is one bivariate cubic in (bs, bv) per region of a
// 21-region partition of { 0 <= bv < 1, 0 <= bs < 2 - 2 bv }.

#ifndef STEPBID_CLOSEDFORM_HPP_
#define STEPBID_CLOSEDFORM_HPP_

#include <optional>
#include <string>
#include <vector>

#include "stepbid/payoff.hpp"
#include "stepbid/polynomial.hpp"
#include "stepbid/rational.hpp"

namespace stepbid {

// Transcribed expressions, kept verbatim (after expansion) so they can be
// audited against the exact oracle. The implemented forms below are built
// from these.
namespace printed {

// E[pi_S](b), three pieces.
const PiecewisePolynomial& simple_expected();
// d/db E[pi_S](b), three pieces.
const PiecewisePolynomial& simple_derivative();
// E[pi_B](b), eight pieces. Piece 2 ([1/2,3/4)) carries a b^2/8 error.
const PiecewisePolynomial& block_expected();
// d/db E[pi_B](b): only the pieces whose printed form is well formed
// (indices 1, 3, 4, 5, 7); the rest are nullopt.
const std::vector<std::optional<Polynomial>>& block_derivative();
// The 21 multi-part expressions in print order (ids 1..21).
const std::vector<BivariatePolynomial>& multipart_expressions();
const std::vector<std::string>& multipart_expression_text();

}  // namespace printed

// Implemented piecewise forms.
const PiecewisePolynomial& simple_form();
const PiecewisePolynomial& block_form();

// Throws std::domain_error unless 0 <= b <= 1.
Rational expected_simple(const Rational& b, const CostParams& c);
double expected_simple(double b, const BasicCost<double>& c);
Rational d_expected_simple(const Rational& b, const CostParams& c,
                           Side side = Side::kRight);
double d_expected_simple(double b, const BasicCost<double>& c,
                         Side side = Side::kRight);

// Throws std::domain_error unless 0 <= b <= 2.
Rational expected_block(const Rational& b, const CostParams& c);
double expected_block(double b, const BasicCost<double>& c);
Rational d_expected_block(const Rational& b, const CostParams& c,
                          Side side = Side::kRight);
double d_expected_block(double b, const BasicCost<double>& c,
                        Side side = Side::kRight);

// bs bounds are affine in bv: constant + slope * bv.
struct AffineBound {
  Rational constant;
  Rational slope;

  Rational at(const Rational& bv) const { return constant + slope * bv; }
  double at(double bv) const;
};

struct MultipartRegion {
  int index = 0;      // 1..21
  std::string label;  // "1(a)" .. "4(b)"
  Rational bv_lo;     // inclusive
  Rational bv_hi;     // exclusive
  AffineBound bs_lo;  // inclusive
  AffineBound bs_hi;  // exclusive unless bs_hi_inclusive
  bool bs_hi_inclusive = false;

  bool contains(const Rational& bv, const Rational& bs) const;
  bool contains(double bv, double bs) const;

  // Corners in (bs, bv) order, counter-clockwise; three when the region
  // pinches to a point.
  std::vector<std::pair<Rational, Rational>> corners() const;
};

const std::vector<MultipartRegion>& multipart_regions();

// First region (in 1(a)..4(b) order) whose inequalities hold. Throws
// std::domain_error outside { 0 <= bv < 1, 0 <= bs < 2 - 2 bv }.
const MultipartRegion& multipart_region(const Rational& bv, const Rational& bs);

// How a region's implemented polynomial was obtained.
struct RegionForm {
  BivariatePolynomial polynomial;     // the implemented form
  BivariatePolynomial oracle_fit;     // exact fit of the oracle inside the region
  std::optional<int> printed_id;     // printed expression used, if any
  std::vector<int> matching_ids;      // every printed expression equal to the fit
  bool fit_verified = false;          // fit reproduced the oracle at held-out points
};

/**
 * Region-to-polynomial table for multi-part bidding.
 *
 * Built once on first use: every region's expected profit is fitted exactly
 * (rational cubic interpolation of the oracle at interior points, checked at
 * held-out points), and each printed expression is matched against the fits
 * by exact coefficient comparison. A region keeps the printed expression at
 * its own print position when that matches, otherwise any matching printed
 * expression, otherwise the fitted polynomial.
 */
class MultipartTable {
 public:
  static MultipartTable build();
  // Same, matching against a caller-supplied expression list (ids 1..n).
  static MultipartTable build(const std::vector<BivariatePolynomial>& printed);

  const std::vector<RegionForm>& forms() const { return forms_; }
  const RegionForm& form(int region_index) const { return forms_.at(region_index - 1); }

  // Printed expression ids equal to no region's fit.
  std::vector<int> unclaimed_expressions() const;
  // Regions whose implemented polynomial had to be re-derived.
  std::vector<int> rederived_regions() const;

 private:
  std::vector<RegionForm> forms_;
  int expression_count_ = 0;
};

const MultipartTable& multipart_table();

// Expected profit of a multi-part bid. Accepts the closed feasible set
// { bs >= 0, 0 <= bv <= 1, bs + 2 bv <= 2 }; on bs + 2 bv = 2 the bid is
// accepted with probability zero and the value is 0. Throws
// std::domain_error outside it.
Rational expected_multipart(const Rational& bs, const Rational& bv, const CostParams& c);
double expected_multipart(double bs, double bv, const BasicCost<double>& c);

// Multi-part expected profit with the costs bound, for repeated double
// evaluation.
class MultipartSurface {
 public:
  explicit MultipartSurface(const BasicCost<double>& cost);

  // Region index (0-based) at a point, or -1 on/after the bs + 2 bv = 2 edge.
  int region_at(double bs, double bv) const;
  double operator()(double bs, double bv) const;
  const BoundCubic2& piece(int region) const { return pieces_[region]; }

 private:
  std::vector<BoundCubic2> pieces_;
};

}  // namespace stepbid

#endif  // STEPBID_CLOSEDFORM_HPP_
