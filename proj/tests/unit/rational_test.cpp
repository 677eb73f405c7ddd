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

#include "stepbid/rational.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

#include "support/test_support.hpp"

namespace stepbid {
namespace {

using testing::q;

TEST(ParseRational, Fractions) {
  EXPECT_EQ(parse_rational("1/4"), ratio(1, 4));
  EXPECT_EQ(parse_rational(" 2/8 "), ratio(1, 4));
  EXPECT_EQ(parse_rational("-3/6"), ratio(-1, 2));
  EXPECT_EQ(parse_rational("010/020"), ratio(1, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
}

TEST(ParseRational, DecimalsAreBaseTen) {
  EXPECT_EQ(parse_rational("0.25"), ratio(1, 4));
  EXPECT_EQ(parse_rational("0.025"), ratio(1, 40));
  EXPECT_EQ(parse_rational("0.1"), ratio(1, 10));
  EXPECT_EQ(parse_rational(".5"), ratio(1, 2));
  EXPECT_EQ(parse_rational("3."), Rational(3));
  EXPECT_EQ(parse_rational("08"), Rational(8));
}

TEST(ParseRational, Exponents) {
  EXPECT_EQ(parse_rational("1e-3"), ratio(1, 1000));
  EXPECT_EQ(parse_rational("2.5E2"), Rational(250));
  EXPECT_EQ(parse_rational("-1.5e+1"), Rational(-15));
}

TEST(ParseRational, RejectsMalformed) {
  for (const char* bad : {"", " ", "1/0", "a", "1/", "/2", ".", "1e", "1.2.3", "1/2/3",
                          "--1", "0x10", "1e1234567"}) {
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
  }
}

TEST(Conversion, ToDoubleRoundsToNearest) {
  EXPECT_EQ(to_double(ratio(1, 3)), 1.0 / 3.0);
  EXPECT_EQ(to_double(ratio(-2, 3)), -2.0 / 3.0);
  EXPECT_EQ(to_double(ratio(1, 10)), 0.1);
  EXPECT_EQ(to_double(Rational(0)), 0.0);
  EXPECT_EQ(from_double(0.375), ratio(3, 8));
  EXPECT_THROW(from_double(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST(Conversion, DisplayUsesTwelveSignificantDigits) {
  EXPECT_EQ(to_display_string(q("413/960")), "0.430208333333");
  EXPECT_EQ(to_display_string(q("1")), "1");
  EXPECT_EQ(to_display_string(-0.0), "0");
  EXPECT_EQ(to_exact_string(q("-21/20")), "-21/20");
}

}  // namespace
}  // namespace stepbid
