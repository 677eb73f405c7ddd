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

#include "stepbid/polynomial.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "stepbid/closedform.hpp"
#include "support/test_support.hpp"

namespace stepbid {
namespace {

using testing::q;

TEST(ParsePolynomial, Coefficients) {
  const Polynomial p = parse_polynomial("1/2 b cs - b + cv");
  ASSERT_EQ(p.degree(), 1);
  EXPECT_EQ(p.coefficients()[0], (AffineCoef{q("0"), q("0"), q("1")}));
  EXPECT_EQ(p.coefficients()[1], (AffineCoef{q("-1"), q("1/2"), q("0")}));

  const Polynomial r = parse_polynomial("-b^2 + 2*b^2 + 3 b*b - cs");
  EXPECT_EQ(r.coefficients()[2], (AffineCoef{q("4"), q("0"), q("0")}));
  EXPECT_EQ(r.coefficients()[0], (AffineCoef{q("0"), q("-1"), q("0")}));
}

TEST(ParsePolynomial, Errors) {
  for (const char* bad : {"", "b +", "b^", "2 $ b", "cs cv", "x"}) {
    EXPECT_THROW(parse_polynomial(bad), std::invalid_argument) << bad;
  }
}

TEST(Polynomial, DerivativeAndEvaluation) {
  const Polynomial p = parse_polynomial("-5/12 b^3 + 5/8 b^2 cs + 5/4 b^2 cv - 9/8 cs - 9/4 cv + 67/64");
  EXPECT_EQ(p.derivative(), parse_polynomial("-5/4 b^2 + 5/4 b cs + 5/2 b cv"));
  const CostParams c(q("1/5"), q("1/10"));
  EXPECT_EQ(p(q("1"), c), q("413/960"));
  EXPECT_NEAR(p(1.0, testing::as_double(c)), 413.0 / 960.0, 1e-15);
  const AffineCoef sym = p.at(q("1"));
  EXPECT_EQ(sym.at(c), q("413/960"));
  EXPECT_EQ(p.bind(c).size(), 4u);
  EXPECT_EQ(parse_polynomial("b^2 - cs").derivative().derivative().derivative(), Polynomial());
}

TEST(Polynomial, ToString) {
  EXPECT_EQ(to_string(Polynomial()), "0");
  EXPECT_NE(to_string(parse_polynomial("1/2 b cs - b + cv")).find("b"), std::string::npos);
}

TEST(PiecewisePolynomial, SidesAndDomain) {
  const PiecewisePolynomial& s = simple_form();
  EXPECT_EQ(s.piece_index(q("1/4")), 1u);
  EXPECT_EQ(s.piece_index(q("1/4"), Side::kLeft), 0u);
  EXPECT_EQ(s.piece_index(q("1")), 2u);
  EXPECT_EQ(s.piece_index(0.0, Side::kLeft), 0u);
  EXPECT_THROW(s.piece_index(q("11/10")), std::domain_error);
  EXPECT_THROW(s.piece_index(-1e-9), std::domain_error);
  EXPECT_THROW(PiecewisePolynomial({q("0"), q("1")}, {}), std::invalid_argument);
  EXPECT_THROW(PiecewisePolynomial({q("1"), q("0")}, {Polynomial()}), std::invalid_argument);
}

TEST(PiecewisePolynomial, JumpAt) {
  for (std::size_t i = 1; i + 1 < simple_form().breakpoints().size(); ++i) {
    EXPECT_TRUE(simple_form().jump_at(i).is_zero()) << i;
  }
  for (std::size_t i = 1; i + 1 < block_form().breakpoints().size(); ++i) {
    EXPECT_TRUE(block_form().jump_at(i).is_zero()) << i;
  }
  // The printed [1/2,3/4) block piece carries an extra b^2/8: jumps of
  // +1/32 at b = 1/2 and -9/128 at b = 3/4.
  EXPECT_EQ(printed::block_expected().jump_at(2), (AffineCoef{q("1/32"), q("0"), q("0")}));
  EXPECT_EQ(printed::block_expected().jump_at(3), (AffineCoef{q("-9/128"), q("0"), q("0")}));
  EXPECT_THROW(simple_form().jump_at(0), std::out_of_range);
  EXPECT_THROW(simple_form().jump_at(3), std::out_of_range);
}

TEST(BoundPiecewise, MatchesExact) {
  const CostParams c(q("3/10"), q("1/20"));
  const auto bound = BoundPiecewise::bind(block_form(), testing::as_double(c));
  testing::RationalCases cases(5);
  for (int k = 0; k < 200; ++k) {
    const Rational b = cases.next(q("0"), q("2"));
    EXPECT_NEAR(bound.value(to_double(b)), to_double(block_form().value(b, c)), 1e-14);
  }
}

TEST(Bivariate, ParseAndEvaluate) {
  const BivariatePolynomial p = parse_bivariate("bs^2 bv - 2 bs cs + 3/4 bv^3 cv - 1");
  EXPECT_EQ(p.coefficient(2, 1), (AffineCoef{q("1"), q("0"), q("0")}));
  EXPECT_EQ(p.coefficient(1, 0), (AffineCoef{q("0"), q("-2"), q("0")}));
  EXPECT_EQ(p.coefficient(0, 3), (AffineCoef{q("0"), q("0"), q("3/4")}));
  const CostParams c(q("1/2"), q("1"));
  // 1/4*1/3 - 2*1/2*1/2 + 3/4*1/27 - 1
  EXPECT_EQ(p(q("1/2"), q("1/3"), c), q("1/12") - q("1/2") + q("1/36") - 1);
  EXPECT_EQ(p.at(q("1/2"), q("1/3")).at(c), p(q("1/2"), q("1/3"), c));
  EXPECT_THROW(parse_bivariate("bs^4"), std::invalid_argument);
}

TEST(BoundCubic2, DerivativesMatchFiniteDifferences) {
  const BivariatePolynomial p =
      parse_bivariate("bs^3 - 2 bs^2 bv cs + 3/4 bs bv^2 + bv^3 cv - bs bv + 1/2 bv cs");
  const auto f = BoundCubic2::bind(p, BasicCost<double>(0.3, 0.2));
  const double h = 1e-5;
  for (double bs : {0.1, 0.4, 0.9}) {
    for (double bv : {0.05, 0.3, 0.7}) {
      const auto g = f.gradient(bs, bv);
      EXPECT_NEAR(g[0], (f.value(bs + h, bv) - f.value(bs - h, bv)) / (2 * h), 1e-8);
      EXPECT_NEAR(g[1], (f.value(bs, bv + h) - f.value(bs, bv - h)) / (2 * h), 1e-8);
      const auto H = f.hessian(bs, bv);
      EXPECT_NEAR(H[0], (f.gradient(bs + h, bv)[0] - f.gradient(bs - h, bv)[0]) / (2 * h), 1e-7);
      EXPECT_NEAR(H[1], (f.gradient(bs, bv + h)[0] - f.gradient(bs, bv - h)[0]) / (2 * h), 1e-7);
      EXPECT_NEAR(H[2], (f.gradient(bs, bv + h)[1] - f.gradient(bs, bv - h)[1]) / (2 * h), 1e-7);
    }
  }
}

}  // namespace
}  // namespace stepbid
