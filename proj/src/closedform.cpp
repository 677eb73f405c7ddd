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

#include "stepbid/closedform.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "stepbid/distribution.hpp"
#include "stepbid/oracle.hpp"

namespace stepbid {

namespace {

std::vector<Rational> quarters(int count) {
  std::vector<Rational> out;
  for (int i = 0; i <= count; ++i) out.push_back(ratio(i, 4));
  return out;
}

PiecewisePolynomial parse_pieces(std::vector<Rational> breakpoints,
                                 std::initializer_list<const char*> pieces) {
  std::vector<Polynomial> parsed;
  for (const char* text : pieces) parsed.push_back(parse_polynomial(text));
  return PiecewisePolynomial(std::move(breakpoints), std::move(parsed));
}

const std::vector<Rational> kSimpleBreaks = {Rational(0), Rational(1, 4),
                                             Rational(3, 4), Rational(1)};

// Block piece on [1/2, 3/4) with the b^2 coefficient (9 c_s + 18 c_v + 3)/8;
// the printed "+4" does not integrate to the exact value and breaks
// continuity at 1/2 and 3/4.
constexpr const char* kBlockPieceHalfToThreeQuarters =
    "-3/4 b^3 + 9/8 b^2 cs + 9/4 b^2 cv + 3/8 b^2 - 3/4 b cs - 3/2 b cv - 27/32 cs - "
    "27/16 cv + 125/128";

}  // namespace

namespace printed {

const PiecewisePolynomial& simple_expected() {
  static const PiecewisePolynomial form = parse_pieces(
      kSimpleBreaks,
      {
          "1/4 b^2 cs - 1/2 b^2 + b cv - cs - 2 cv + 1",
          "9/4 b^2 cs - 3/2 b^2 - 3/4 b cs + 3 b cv - 15/16 cs - 5/2 cv + 17/16",
          "1/4 b^2 cs - 1/2 b^2 + 1/2 b cs + b cv - 3/4 cs - cv + 1/2",
      });
  return form;
}

const PiecewisePolynomial& simple_derivative() {
  static const PiecewisePolynomial form = parse_pieces(
      kSimpleBreaks,
      {
          "1/2 b cs - b + cv",
          "9/2 b cs - 3 b - 3/4 cs + 3 cv",
          "1/2 b cs - b + 1/2 cs + cv",
      });
  return form;
}

const PiecewisePolynomial& block_expected() {
  static const PiecewisePolynomial form = parse_pieces(
      quarters(8),
      {
          "-1/12 b^3 + 1/8 b^2 cs + 1/4 b^2 cv - cs - 2 cv + 1",
          "-5/12 b^3 + 5/8 b^2 cs + 5/4 b^2 cv + 1/8 b^2 - 1/4 b cs - 1/2 b cv - 31/32 cs - "
          "31/16 cv + 383/384",
          "-3/4 b^3 + 9/8 b^2 cs + 9/4 b^2 cv + 1/2 b^2 - 3/4 b cs - 3/2 b cv - 27/32 cs - "
          "27/16 cv + 125/128",
          "-5/12 b^3 + 5/8 b^2 cs + 5/4 b^2 cv - 9/8 cs - 9/4 cv + 67/64",
          "5/12 b^3 - 5/8 b^2 cs - 5/4 b^2 cv - 5/4 b^2 + 5/2 b cs + 5 b cv - 19/8 cs - "
          "19/4 cv + 281/192",
          "3/4 b^3 - 9/8 b^2 cs - 9/4 b^2 cv - 15/8 b^2 + 15/4 b cs + 15/2 b cv - 101/32 cs - "
          "101/16 cv + 229/128",
          "5/12 b^3 - 5/8 b^2 cs - 5/4 b^2 cv - 9/8 b^2 + 9/4 b cs + 9/2 b cv - 65/32 cs - "
          "65/16 cv + 157/128",
          "1/12 b^3 - 1/8 b^2 cs - 1/4 b^2 cv - 1/4 b^2 + 1/2 b cs + b cv - 1/2 cs - cv + 1/3",
      });
  return form;
}

const std::vector<std::optional<Polynomial>>& block_derivative() {
  static const std::vector<std::optional<Polynomial>> table = {
      std::nullopt,  // unbalanced parenthesis
      parse_polynomial("-5/4 b^2 + 5/4 b cs + 5/2 b cv + 1/4 b - 1/4 cs - 1/2 cv"),
      std::nullopt,  // cubic term where a quadratic belongs
      parse_polynomial("-5/4 b^2 + 5/4 b cs + 5/2 b cv"),
      parse_polynomial("5/4 b^2 - 5/4 b cs - 5/2 b cv - 5/2 b + 5/2 cs + 5 cv"),
      parse_polynomial("9/4 b^2 - 9/4 b cs - 9/2 b cv - 15/4 b + 15/4 cs + 15/2 cv"),
      std::nullopt,  // unbalanced parenthesis
      parse_polynomial("1/4 b^2 - 1/4 b cs - 1/2 b cv - 1/2 b + 1/2 cs + cv"),
  };
  return table;
}

const std::vector<std::string>& multipart_expression_text() {
  static const std::vector<std::string> text = {
      "-1/12 bs^3 - 1/2 bs^2 bv + 1/8 bs^2 cs + 1/4 bs^2 cv - 1/2 bs bv^2 + 1/2 bs bv cs + 1/2 bs bv cv + 1/4 bv^2 cs - 1/2 bv^2 + bv cv - cs - 2 cv + 1",
      "-5/12 bs^3 - 5/2 bs^2 bv + 5/8 bs^2 cs + 5/4 bs^2 cv + 1/8 bs^2 - 7/2 bs bv^2 + 5/2 bs bv cs + 7/2 bs bv cv + 1/2 bs bv - 1/4 bs cs - 1/2 bs cv - 4/3 bv^3 + 7/4 bv^2 cs + 2 bv^2 cv - 1/8 bv^2 - 1/2 bv cs + 1/4 bv cv - 31/32 cs - 31/16 cv + 383/384",
      "-3/4 bs^3 - 9/2 bs^2 bv + 9/8 bs^2 cs + 9/4 bs^2 cv + 3/8 bs^2 - 15/2 bs bv^2 + 9/2 bs bv cs + 15/2 bs bv cv + 3/2 bs bv - 3/4 bs cs - 3/2 bs cv - 4 bv^3 + 15/4 bv^2 cs + 6 bv^2 cv + 7/8 bv^2 - 3/2 bv cs - 7/4 bv cv - 27/32 cs - 27/16 cv + 125/128",
      "-5/12 bs^3 - 5/2 bs^2 bv + 5/8 bs^2 cs + 5/4 bs^2 cv - 9/2 bs bv^2 + 5/2 bs bv cs + 9/2 bs bv cv - 8/3 bv^3 + 9/4 bv^2 cs + 4 bv^2 cv - 1/4 bv^2 + 1/2 bv cv - 9/8 cs - 9/4 cv + 67/64",
      "1/4 bs^3 + 3/2 bs^2 bv - 3/8 bs^2 cs - 3/4 bs^2 cv - bs^2 + 7/2 bs bv^2 - 3/2 bs bv cs - 7/2 bs bv cv - 4 bs bv + 2 bs cs + 4 bs cv + 8/3 bv^3 - 7/4 bv^2 cs - 4 bv^2 cv - 17/4 bv^2 + 4 bv cs + 17/2 bv cv - 17/8 cs - 17/4 cv + 265/192",
      "5/12 bs^3 + 5/2 bs^2 bv - 5/8 bs^2 cs - 5/4 bs^2 cv - 5/4 bs^2 + 5 bs bv^2 - 5/2 bs bv cs - 5 bs bv cv - 5 bs bv + 5/2 bs cs + 5 bs cv + 10/3 bv^3 - 5/2 bv^2 cs - 5 bv^2 cv - 5 bv^2 + 5 bv cs + 10 bv cv - 19/8 cs - 19/4 cv + 281/192",
      "3/4 bs^3 + 9/2 bs^2 bv - 9/8 bs^2 cs - 9/4 bs^2 cv - 15/8 bs^2 + 9 bs bv^2 - 9/2 bs bv cs - 9 bs bv cv - 15/2 bs bv + 15/4 bs cs + 15/2 bs cv + 6 bv^3 - 9/2 bv^2 cs - 9 bv^2 cv - 15/2 bv^2 + 15/2 bv cs + 15 bv cv - 101/32 cs - 101/16 cv + 229/128",
      "5/12 bs^3 + 5/2 bs^2 bv - 5/8 bs^2 cs - 5/4 bs^2 cv - 9/8 bs^2 + 5 bs bv^2 - 5/2 bs bv cs - 5 bs bv cv - 9/2 bs bv + 9/4 bs cs + 9/2 bs cv + 10/3 bv^3 - 5/2 bv^2 cs - 5 bv^2 cv - 9/2 bv^2 + 9/2 bv cs + 9 bv cv - 65/32 cs - 65/16 cv + 157/128",
      "1/12 bs^3 + 1/2 bs^2 bv - 1/8 bs^2 cs - 1/4 bs^2 cv - 1/4 bs^2 + bs bv^2 - 1/2 bs bv cs - bs bv cv - bs bv + 1/2 bs cs + bs cv + 2/3 bv^3 - 1/2 bv^2 cs - bv^2 cv - bv^2 + bv cs + 2 bv cv - 1/2 cs - cv + 1/3",
      "-3/4 bs^3 - 9/2 bs^2 bv + 9/8 bs^2 cs + 9/4 bs^2 cv + 3/8 bs^2 - 9/2 bs bv^2 + 9/2 bs bv cs + 9/2 bs bv cv + 3/4 bs bv - 3/4 bs cs - 3/4 bs cv + 9/4 bv^2 cs - 3/2 bv^2 - 3/4 bv cs + 3 bv cv - 15/16 cs - 5/2 cv + 17/16",
      "1/4 bs^3 + 3/2 bs^2 bv - 3/8 bs^2 cs - 3/4 bs^2 cv - bs^2 + 9/2 bs bv^2 - 3/2 bs bv cs - 9/2 bs bv cv - 17/4 bs bv + 2 bs cs + 17/4 bs cv + 4 bv^3 - 9/4 bv^2 cs - 6 bv^2 cv - 41/8 bv^2 + 17/4 bv cs + 41/4 bv cv - 69/32 cs - 73/16 cv + 181/128",
      "3/4 bs^3 + 9/2 bs^2 bv - 9/8 bs^2 cs - 9/4 bs^2 cv - 15/8 bs^2 + 9 bs bv^2 - 9/2 bs bv cs - 9 bs bv cv - 15/2 bs bv + 15/4 bs cs + 15/2 bs cv + 6 bv^3 - 9/2 bv^2 cs - 9 bv^2 cv - 15/2 bv^2 + 15/2 bv cs + 15 bv cv - 101/32 cs - 101/16 cv + 229/128",
      "5/12 bs^3 + 5/2 bs^2 bv - 5/8 bs^2 cs - 5/4 bs^2 cv - 9/8 bs^2 + 5 bs bv^2 - 5/2 bs bv cs - 5 bs bv cv - 9/2 bs bv + 9/4 bs cs + 9/2 bs cv + 10/3 bv^3 - 5/2 bv^2 cs - 5 bv^2 cv - 9/2 bv^2 + 9/2 bv cs + 9 bv cv - 65/32 cs - 65/16 cv + 157/128",
      "1/12 bs^3 + 1/2 bs^2 bv - 1/8 bs^2 cs - 1/4 bs^2 cv - 1/4 bs^2 + bs bv^2 - 1/2 bs bv cs - bs bv cv - bs bv + 1/2 bs cs + bs cv + 2/3 bv^3 - 1/2 bv^2 cs - bv^2 cv - bv^2 + bv cs + 2 bv cv - 1/2 cs - cv + 1/3",
      "-3/4 bs^3 - 9/2 bs^2 bv + 9/8 bs^2 cs + 9/4 bs^2 cv + 3/8 bs^2 - 9/2 bs bv^2 + 9/2 bs bv cs + 9/2 bs bv cv + 3/4 bs bv - 3/4 bs cs - 3/4 bs cv + 9/4 bv^2 cs - 3/2 bv^2 - 3/4 bv cs + 3 bv cv - 15/16 cs - 5/2 cv + 17/16",
      "1/4 bs^3 + 3/2 bs^2 bv - 3/8 bs^2 cs - 3/4 bs^2 cv - bs^2 + 9/2 bs bv^2 - 3/2 bs bv cs - 9/2 bs bv cv - 17/4 bs bv + 2 bs cs + 17/4 bs cv + 4 bv^3 - 9/4 bv^2 cs - 6 bv^2 cv - 41/8 bv^2 + 17/4 bv cs + 41/4 bv cv - 69/32 cs - 73/16 cv + 181/128",
      "-1/12 bs^3 - 1/2 bs^2 bv + 1/8 bs^2 cs + 1/4 bs^2 cv - 1/4 bs^2 + 1/2 bs bv^2 + 1/2 bs bv cs - 1/2 bs bv cv - 5/4 bs bv + 1/2 bs cs + 5/4 bs cv + 4/3 bv^3 - 1/4 bv^2 cs - 2 bv^2 cv - 17/8 bv^2 + 5/4 bv cs + 17/4 bv cv - 33/32 cs - 37/16 cv + 109/128",
      "5/12 bs^3 + 5/2 bs^2 bv - 5/8 bs^2 cs - 5/4 bs^2 cv - 9/8 bs^2 + 5 bs bv^2 - 5/2 bs bv cs - 5 bs bv cv - 9/2 bs bv + 9/4 bs cs + 9/2 bs cv + 10/3 bv^3 - 5/2 bv^2 cs - 5 bv^2 cv - 9/2 bv^2 + 9/2 bv cs + 9 bv cv - 65/32 cs - 65/16 cv + 157/128",
      "1/12 bs^3 + 1/2 bs^2 bv - 1/8 bs^2 cs - 1/4 bs^2 cv - 1/4 bs^2 + bs bv^2 - 1/2 bs bv cs - bs bv cv - bs bv + 1/2 bs cs + bs cv + 2/3 bv^3 - 1/2 bv^2 cs - bv^2 cv - bv^2 + bv cs + 2 bv cv - 1/2 cs - cv + 1/3",
      "-1/12 bs^3 - 1/2 bs^2 bv + 1/8 bs^2 cs + 1/4 bs^2 cv - 1/4 bs^2 - 1/2 bs bv^2 + 1/2 bs bv cs + 1/2 bs bv cv - 1/2 bs bv + 1/2 bs cs + 1/2 bs cv + 1/4 bv^2 cs - 1/2 bv^2 + 1/2 bv cs + bv cv - 3/4 cs - cv + 1/2",
      "1/12 bs^3 + 1/2 bs^2 bv - 1/8 bs^2 cs - 1/4 bs^2 cv - 1/4 bs^2 + bs bv^2 - 1/2 bs bv cs - bs bv cv - bs bv + 1/2 bs cs + bs cv + 2/3 bv^3 - 1/2 bv^2 cs - bv^2 cv - bv^2 + bv cs + 2 bv cv - 1/2 cs - cv + 1/3",
  };
  return text;
}

const std::vector<BivariatePolynomial>& multipart_expressions() {
  static const std::vector<BivariatePolynomial> parsed = [] {
    std::vector<BivariatePolynomial> out;
    for (const auto& t : multipart_expression_text()) out.push_back(parse_bivariate(t));
    return out;
  }();
  return parsed;
}

}  // namespace printed

const PiecewisePolynomial& simple_form() { return printed::simple_expected(); }

const PiecewisePolynomial& block_form() {
  static const PiecewisePolynomial form = [] {
    std::vector<Polynomial> pieces = printed::block_expected().pieces();
    pieces[2] = parse_polynomial(kBlockPieceHalfToThreeQuarters);
    return PiecewisePolynomial(quarters(8), std::move(pieces));
  }();
  return form;
}

namespace {

template <class T>
void check_range(const T& b, int upper, const char* what) {
  if (b < 0 || b > upper) {
    throw std::domain_error(std::string(what) + " bid outside [0," +
                            std::to_string(upper) + "]");
  }
}

}  // namespace

Rational expected_simple(const Rational& b, const CostParams& c) {
  check_range(b, 1, "simple");
  return simple_form().value(b, c);
}

double expected_simple(double b, const BasicCost<double>& c) {
  check_range(b, 1, "simple");
  return simple_form().value(b, c);
}

Rational d_expected_simple(const Rational& b, const CostParams& c, Side side) {
  check_range(b, 1, "simple");
  return simple_form().derivative(b, c, side);
}

double d_expected_simple(double b, const BasicCost<double>& c, Side side) {
  check_range(b, 1, "simple");
  return simple_form().derivative(b, c, side);
}

Rational expected_block(const Rational& b, const CostParams& c) {
  check_range(b, 2, "block");
  return block_form().value(b, c);
}

double expected_block(double b, const BasicCost<double>& c) {
  check_range(b, 2, "block");
  return block_form().value(b, c);
}

Rational d_expected_block(const Rational& b, const CostParams& c, Side side) {
  check_range(b, 2, "block");
  return block_form().derivative(b, c, side);
}

double d_expected_block(double b, const BasicCost<double>& c, Side side) {
  check_range(b, 2, "block");
  return block_form().derivative(b, c, side);
}

double AffineBound::at(double bv) const {
  return to_double(constant) + to_double(slope) * bv;
}

bool MultipartRegion::contains(const Rational& bv, const Rational& bs) const {
  if (bv < bv_lo || bv >= bv_hi) return false;
  if (bs < bs_lo.at(bv)) return false;
  const Rational hi = bs_hi.at(bv);
  return bs_hi_inclusive ? bs <= hi : bs < hi;
}

bool MultipartRegion::contains(double bv, double bs) const {
  if (bv < to_double(bv_lo) || bv >= to_double(bv_hi)) return false;
  if (bs < bs_lo.at(bv)) return false;
  const double hi = bs_hi.at(bv);
  return bs_hi_inclusive ? bs <= hi : bs < hi;
}

std::vector<std::pair<Rational, Rational>> MultipartRegion::corners() const {
  std::vector<std::pair<Rational, Rational>> out = {
      {bs_lo.at(bv_lo), bv_lo},
      {bs_hi.at(bv_lo), bv_lo},
      {bs_hi.at(bv_hi), bv_hi},
      {bs_lo.at(bv_hi), bv_hi},
  };
  std::vector<std::pair<Rational, Rational>> dedup;
  for (const auto& p : out) {
    if (dedup.empty() || dedup.back() != p) dedup.push_back(p);
  }
  if (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
  return dedup;
}

const std::vector<MultipartRegion>& multipart_regions() {
  static const std::vector<MultipartRegion> regions = [] {
    struct Band {
      int number;
      Rational lo;
      Rational hi;
      std::vector<AffineBound> bounds;  // successive bs limits
    };
    auto bound = [](Rational c, int slope) { return AffineBound{std::move(c), Rational(slope)}; };
    const std::vector<Band> bands = {
        {1, Rational(0), Rational(1, 4),
         {bound(0, 0), bound(Rational(1, 4), -1), bound(Rational(1, 2), -2),
          bound(Rational(3, 4), -1), bound(1, -2), bound(1, -1), bound(Rational(5, 4), -2),
          bound(Rational(3, 2), -2), bound(Rational(7, 4), -2), bound(2, -2)}},
        {2, Rational(1, 4), Rational(1, 2),
         {bound(0, 0), bound(Rational(3, 4), -1), bound(1, -1), bound(Rational(3, 2), -2),
          bound(Rational(7, 4), -2), bound(2, -2)}},
        {3, Rational(1, 2), Rational(3, 4),
         {bound(0, 0), bound(Rational(3, 4), -1), bound(Rational(3, 2), -2), bound(1, -1),
          bound(Rational(7, 4), -2), bound(2, -2)}},
        {4, Rational(3, 4), Rational(1), {bound(0, 0), bound(1, -1), bound(2, -2)}},
    };
    std::vector<MultipartRegion> out;
    for (const auto& band : bands) {
      for (std::size_t k = 0; k + 1 < band.bounds.size(); ++k) {
        MultipartRegion r;
        r.index = static_cast<int>(out.size()) + 1;
        r.label = std::to_string(band.number) + "(" + static_cast<char>('a' + k) + ")";
        r.bv_lo = band.lo;
        r.bv_hi = band.hi;
        r.bs_lo = band.bounds[k];
        r.bs_hi = band.bounds[k + 1];
        r.bs_hi_inclusive = band.number == 1 && k == 0;
        out.push_back(std::move(r));
      }
    }
    return out;
  }();
  return regions;
}

const MultipartRegion& multipart_region(const Rational& bv, const Rational& bs) {
  if (bv < 0 || bv >= 1 || bs < 0 || bs >= 2 - 2 * bv) {
    throw std::domain_error(
        "multipart region needs 0 <= bv < 1 and 0 <= bs < 2 - 2 bv");
  }
  for (const auto& r : multipart_regions()) {
    if (r.contains(bv, bs)) return r;
  }
  throw std::logic_error("multipart regions do not cover the domain");
}

namespace {

constexpr std::array<std::pair<int, int>, 10> kMonomials = {{
    {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3},
}};

// Exact oracle value of the multi-part expected profit under the reference
// density, split into its constant / c_s / c_v parts.
std::array<Rational, 3> oracle_parts(const Rational& bs, const Rational& bv) {
  static const StepDensity density = default_density();
  const MultipartBid bid(bs, bv);
  Rational base = exact_expected(Bid(bid), CostParams(0, 0), density);
  Rational with_startup = exact_expected(Bid(bid), CostParams(1, 0), density);
  Rational with_variable = exact_expected(Bid(bid), CostParams(0, 1), density);
  return {base, with_startup - base, with_variable - base};
}

// Solves the overdetermined interpolation system exactly; returns the fit and
// whether every extra point agrees with it.
std::pair<BivariatePolynomial, bool> fit_region(const MultipartRegion& region) {
  constexpr int kSteps = 5;
  std::vector<std::array<Rational, 10>> rows;
  std::vector<std::array<Rational, 3>> rhs;
  for (int a = 1; a <= kSteps; ++a) {
    Rational bv = region.bv_lo + (region.bv_hi - region.bv_lo) * ratio(a, kSteps + 1);
    Rational lo = region.bs_lo.at(bv);
    Rational hi = region.bs_hi.at(bv);
    for (int b = 1; b <= kSteps; ++b) {
      // Irregular spacing in bs avoids structured (singular) point sets.
      const Rational t = ratio(b * b + a, (kSteps + 1) * (kSteps + 1));
      Rational bs = lo + (hi - lo) * t;
      std::array<Rational, 10> row;
      for (std::size_t m = 0; m < kMonomials.size(); ++m) {
        Rational v = 1;
        for (int i = 0; i < kMonomials[m].first; ++i) v *= bs;
        for (int j = 0; j < kMonomials[m].second; ++j) v *= bv;
        row[m] = v;
      }
      rows.push_back(row);
      rhs.push_back(oracle_parts(bs, bv));
    }
  }

  // Gauss-Jordan elimination over all rows.
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_row(kMonomials.size());
  for (std::size_t col = 0; col < kMonomials.size(); ++col) {
    std::size_t r = rank;
    while (r < rows.size() && rows[r][col] == 0) ++r;
    if (r == rows.size()) {
      throw std::logic_error("multipart fit: interpolation points are singular in region " +
                             region.label);
    }
    std::swap(rows[r], rows[rank]);
    std::swap(rhs[r], rhs[rank]);
    const Rational inv = 1 / rows[rank][col];
    for (auto& v : rows[rank]) v *= inv;
    for (auto& v : rhs[rank]) v *= inv;
    for (std::size_t other = 0; other < rows.size(); ++other) {
      if (other == rank || rows[other][col] == 0) continue;
      const Rational factor = rows[other][col];
      for (std::size_t k = 0; k < kMonomials.size(); ++k) {
        rows[other][k] -= factor * rows[rank][k];
      }
      for (std::size_t k = 0; k < 3; ++k) rhs[other][k] -= factor * rhs[rank][k];
    }
    pivot_row[col] = rank++;
  }
  bool consistent = true;
  for (std::size_t r = rank; r < rows.size(); ++r) {
    for (const auto& v : rhs[r]) consistent = consistent && v == 0;
  }

  BivariatePolynomial fit;
  for (std::size_t m = 0; m < kMonomials.size(); ++m) {
    const auto& sol = rhs[pivot_row[m]];
    fit.coefficient(kMonomials[m].first, kMonomials[m].second) =
        AffineCoef{sol[0], sol[1], sol[2]};
  }
  return {fit, consistent};
}

}  // namespace

MultipartTable MultipartTable::build() { return build(printed::multipart_expressions()); }

MultipartTable MultipartTable::build(const std::vector<BivariatePolynomial>& printed) {
  MultipartTable table;
  table.expression_count_ = static_cast<int>(printed.size());
  for (const auto& region : multipart_regions()) {
    RegionForm form;
    auto [fit, verified] = fit_region(region);
    form.oracle_fit = fit;
    form.fit_verified = verified;
    for (std::size_t k = 0; k < printed.size(); ++k) {
      if (printed[k] == fit) form.matching_ids.push_back(static_cast<int>(k) + 1);
    }
    const auto& ids = form.matching_ids;
    if (std::find(ids.begin(), ids.end(), region.index) != ids.end()) {
      form.printed_id = region.index;
    } else if (!ids.empty()) {
      form.printed_id = ids.front();
    }
    form.polynomial = form.printed_id ? printed[*form.printed_id - 1] : fit;
    table.forms_.push_back(std::move(form));
  }
  return table;
}

std::vector<int> MultipartTable::unclaimed_expressions() const {
  std::vector<int> out;
  for (int id = 1; id <= expression_count_; ++id) {
    bool claimed = false;
    for (const auto& f : forms_) {
      claimed = claimed || std::find(f.matching_ids.begin(), f.matching_ids.end(), id) !=
                               f.matching_ids.end();
    }
    if (!claimed) out.push_back(id);
  }
  return out;
}

std::vector<int> MultipartTable::rederived_regions() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < forms_.size(); ++i) {
    if (!forms_[i].printed_id) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

const MultipartTable& multipart_table() {
  static const MultipartTable table = MultipartTable::build();
  return table;
}

namespace {

template <class T>
void check_multipart_domain(const T& bs, const T& bv) {
  if (bs < 0 || bv < 0 || bv > 1 || bs + 2 * bv > 2) {
    throw std::domain_error(
        "multipart bid needs bs >= 0, 0 <= bv <= 1 and bs + 2 bv <= 2");
  }
}

}  // namespace

Rational expected_multipart(const Rational& bs, const Rational& bv, const CostParams& c) {
  check_multipart_domain(bs, bv);
  if (bs + 2 * bv == 2) return 0;
  const MultipartRegion& region = multipart_region(bv, bs);
  return multipart_table().form(region.index).polynomial(bs, bv, c);
}

double expected_multipart(double bs, double bv, const BasicCost<double>& c) {
  check_multipart_domain(bs, bv);
  return MultipartSurface(c)(bs, bv);
}

namespace {

struct RegionBoundsD {
  double bv_lo, bv_hi, lo_c, lo_s, hi_c, hi_s;
  bool hi_inclusive;
};

const std::vector<RegionBoundsD>& region_bounds_d() {
  static const std::vector<RegionBoundsD> bounds = [] {
    std::vector<RegionBoundsD> out;
    for (const auto& r : multipart_regions()) {
      out.push_back({to_double(r.bv_lo), to_double(r.bv_hi), to_double(r.bs_lo.constant),
                     to_double(r.bs_lo.slope), to_double(r.bs_hi.constant),
                     to_double(r.bs_hi.slope), r.bs_hi_inclusive});
    }
    return out;
  }();
  return bounds;
}

}  // namespace

MultipartSurface::MultipartSurface(const BasicCost<double>& cost) {
  for (const auto& f : multipart_table().forms()) {
    pieces_.push_back(BoundCubic2::bind(f.polynomial, cost));
  }
}

int MultipartSurface::region_at(double bs, double bv) const {
  bs = std::max(bs, 0.0);
  bv = std::max(bv, 0.0);
  if (bv >= 1.0 || bs + 2.0 * bv >= 2.0) return -1;
  const auto& bounds = region_bounds_d();
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const auto& r = bounds[i];
    if (bv < r.bv_lo || bv >= r.bv_hi) continue;
    if (bs < r.lo_c + r.lo_s * bv) continue;
    const double hi = r.hi_c + r.hi_s * bv;
    if (r.hi_inclusive ? bs <= hi : bs < hi) return static_cast<int>(i);
  }
  // Rounding can leave a point in a sliver between bands; use the band's
  // last region, whose polynomial extends continuously.
  for (std::size_t i = bounds.size(); i-- > 0;) {
    if (bv >= bounds[i].bv_lo && bv < bounds[i].bv_hi) return static_cast<int>(i);
  }
  return -1;
}

double MultipartSurface::operator()(double bs, double bv) const {
  const int region = region_at(bs, bv);
  if (region < 0) return 0.0;
  return pieces_[region].value(bs, bv);
}

}  // namespace stepbid
