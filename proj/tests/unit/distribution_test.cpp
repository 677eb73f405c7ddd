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

#include "stepbid/distribution.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "support/test_support.hpp"

namespace stepbid {
namespace {

using testing::q;

TEST(StepDensity, DefaultDensityValues) {
  const StepDensity d = default_density();
  EXPECT_EQ(pdf(d, q("0.1")), q("1/2"));
  EXPECT_EQ(pdf(d, q("1/4")), q("3/2"));
  EXPECT_EQ(pdf(d, q("3/4")), q("1/2"));
  EXPECT_EQ(pdf(d, q("1")), 0);
  EXPECT_EQ(pdf(d, q("-1/10")), 0);
  EXPECT_EQ(cdf(d, q("1/4")), q("1/8"));
  EXPECT_EQ(cdf(d, q("1/2")), q("1/2"));
  EXPECT_EQ(cdf(d, q("3/4")), q("7/8"));
  EXPECT_EQ(cdf(d, q("2")), 1);
  EXPECT_EQ(cdf(d, q("-1")), 0);
}

TEST(StepDensity, Moments) {
  const StepDensity d = default_density();
  EXPECT_EQ(partial_first_moment(d, q("0"), q("1/4")), q("1/64"));
  EXPECT_EQ(partial_first_moment(d, q("0"), q("1")), q("1/2"));
  EXPECT_EQ(partial_first_moment(d, q("1/4"), q("3/4")), q("3/8"));
  EXPECT_THROW(partial_first_moment(d, q("1/2"), q("1/4")), std::invalid_argument);
}

TEST(StepDensity, InverseCdf) {
  const StepDensity d = default_density();
  EXPECT_EQ(inverse_cdf(d, q("1/8")), q("1/4"));
  EXPECT_EQ(inverse_cdf(d, q("1/2")), q("1/2"));
  EXPECT_EQ(inverse_cdf(d, q("0")), 0);
  EXPECT_EQ(inverse_cdf(d, q("1")), 1);
  EXPECT_THROW(inverse_cdf(d, q("11/10")), std::invalid_argument);
  testing::RationalCases cases(11);
  for (int k = 0; k < 200; ++k) {
    const Rational u = cases.next(q("0"), q("1"));
    EXPECT_EQ(cdf(d, inverse_cdf(d, u)), u) << u;
  }
}

TEST(StepDensity, IntervalConvention) {
  const StepDensity d = default_density();
  EXPECT_EQ(d.interval_of(q("0")), 0u);
  EXPECT_EQ(d.interval_of(q("1/4")), 1u);
  EXPECT_EQ(d.interval_of(q("3/4")), 2u);
  EXPECT_EQ(d.interval_of(q("1")), d.interval_count());
  EXPECT_EQ(d.mass_before(2), q("7/8"));
}

TEST(StepDensity, RejectsInvalid) {
  EXPECT_THROW(StepDensity({q("0")}, {}), std::invalid_argument);
  EXPECT_THROW(StepDensity({q("0"), q("1")}, {q("1"), q("1")}), std::invalid_argument);
  EXPECT_THROW(StepDensity({q("0"), q("2")}, {q("1/2")}), std::invalid_argument);
  EXPECT_THROW(StepDensity({q("0"), q("1/2"), q("1/2"), q("1")}, {q("1"), q("1"), q("1")}),
               std::invalid_argument);
  EXPECT_THROW(StepDensity({q("0"), q("1/2"), q("1")}, {q("-1"), q("3")}),
               std::invalid_argument);
  EXPECT_THROW(StepDensity({q("0"), q("1")}, {q("9/10")}), std::invalid_argument);
}

TEST(CounterRng, IsCounterBased) {
  CounterRng a(42);
  std::vector<double> first;
  for (int i = 0; i < 10; ++i) first.push_back(a.uniform());
  CounterRng b(42, 5);
  for (int i = 5; i < 10; ++i) EXPECT_EQ(b.uniform(), first[i]);
  for (double u : first) {
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(CounterRng::uniform_at(1, 0), CounterRng::uniform_at(2, 0));
}

TEST(Sampler, MatchesExactInverse) {
  const StepDensity d = default_density();
  const Sampler s(d);
  for (int k = 0; k <= 64; ++k) {
    const Rational u = ratio(k, 64);
    if (k == 64) continue;
    EXPECT_NEAR(s.inverse_cdf(to_double(u)), to_double(inverse_cdf(d, u)), 1e-15);
  }
}

// Kolmogorov-Smirnov at the 1% level: D <= 1.628 / sqrt(n).
TEST(Sampler, KolmogorovSmirnov) {
  const StepDensity d = default_density();
  const Sampler s(d);
  constexpr std::size_t n = 1000000;
  std::vector<double> xs(n);
  CounterRng rng(2026);
  for (auto& x : xs) x = s(rng);
  std::sort(xs.begin(), xs.end());
  auto F = [](double x) {
    if (x < 0.25) return 0.5 * x;
    if (x < 0.75) return 0.125 + 1.5 * (x - 0.25);
    return 0.875 + 0.5 * (x - 0.75);
  };
  double dmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = F(xs[i]);
    dmax = std::max({dmax, std::abs(f - static_cast<double>(i) / n),
                     std::abs(static_cast<double>(i + 1) / n - f)});
  }
  EXPECT_LE(dmax, 1.628 / std::sqrt(static_cast<double>(n)));
  double mean = 0.0;
  for (double x : xs) mean += x;
  EXPECT_NEAR(mean / n, 0.5, 4.0 * std::sqrt(0.0651 / n));
}

TEST(DensityFile, ParseAndLoad) {
  const StepDensity d = parse_density(
      "# the default density\n"
      "breakpoints = 0, 1/4, 3/4, 1\n"
      "\n"
      "values = 0.5, 1.5, 0.5\n");
  EXPECT_EQ(d, default_density());
  EXPECT_THROW(parse_density("breakpoints = 0, 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_density("breakpoints = 0, 1\nvalues = 1\nheights = 1\n"),
               std::invalid_argument);
  EXPECT_THROW(parse_density("breakpoints 0 1\nvalues = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_density("breakpoints = 0, 1\nvalues = 2\n"), std::invalid_argument);

  const auto path = std::filesystem::temp_directory_path() / "stepbid_uniform.density";
  {
    std::ofstream f(path);
    f << "breakpoints = 0, 1\nvalues = 1\n";
  }
  EXPECT_EQ(load_density(path), uniform_density());
  std::filesystem::remove(path);
  EXPECT_THROW(load_density(path), std::runtime_error);
}

}  // namespace
}  // namespace stepbid
