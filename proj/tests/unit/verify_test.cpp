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

#include "stepbid/verify.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "stepbid/closedform.hpp"
#include "support/test_support.hpp"

namespace stepbid {
namespace {

using testing::q;

TEST(RationalStream, DeterministicAndInRange) {
  RationalStream a(7);
  RationalStream b(7);
  for (int k = 0; k < 100; ++k) {
    const Rational x = a.next(q("1/4"), q("3/4"));
    EXPECT_EQ(x, b.next(q("1/4"), q("3/4")));
    EXPECT_GE(x, q("1/4"));
    EXPECT_LE(x, q("3/4"));
    EXPECT_LE(x.get_den(), 4000);
  }
  EXPECT_NE(RationalStream(1).next(q("0"), q("1")), RationalStream(2).next(q("0"), q("1")));
}

TEST(RegionSamples, AreInsideTheirRegion) {
  for (int r = 1; r <= 21; ++r) {
    const auto points = region_sample_points(r);
    EXPECT_EQ(points.size(), 5u);
    for (const auto& [bs, bv] : points) {
      EXPECT_EQ(multipart_region(bv, bs).index, r) << bs << ", " << bv;
    }
  }
  EXPECT_EQ(audit_costs().size(), 3u);
}

TEST(Verify, ReportPasses) {
  const VerifyReport report = run_verify(3, 100);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.regions.size(), 21u);
  EXPECT_TRUE(report.unclaimed.empty());
  EXPECT_TRUE(report.rederived.empty());
  bool saw_informational_diff = false;
  for (const auto& c : report.checks) {
    if (c.gating) {
      EXPECT_TRUE(c.pass) << c.name;
      EXPECT_LE(c.max_deviation, kVerifyTolerance) << c.name;
    } else if (!c.pass) {
      saw_informational_diff = true;
    }
  }
  EXPECT_TRUE(saw_informational_diff);
  std::ostringstream out;
  print_report(out, report);
  EXPECT_NE(out.str().find("result: PASS"), std::string::npos);
  EXPECT_NE(out.str().find("unclaimed printed expressions: none"), std::string::npos);
}

TEST(Verify, FailingGateFailsReport) {
  VerifyReport report;
  CheckLine line;
  line.name = "x";
  line.pass = false;
  line.gating = false;
  report.checks.push_back(line);
  EXPECT_TRUE(report.ok());
  report.checks.back().gating = true;
  EXPECT_FALSE(report.ok());
}

}  // namespace
}  // namespace stepbid
