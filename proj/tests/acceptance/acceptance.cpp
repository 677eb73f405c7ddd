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

// Acceptance suite: one PASS/FAIL line per criterion, tolerances and runtime
// limits fixed below. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stepbid/closedform.hpp"
#include "stepbid/distribution.hpp"
#include "stepbid/optimizer.hpp"
#include "stepbid/oracle.hpp"
#include "stepbid/sweep.hpp"
#include "stepbid/verify.hpp"
#include "support/test_support.hpp"

namespace stepbid {
namespace {

using testing::q;

constexpr double kFloatTolerance = 1e-12;
constexpr double kDominanceTolerance = 1e-9;
constexpr double kScanTolerance1d = 1e-9;
constexpr double kScanTolerance2d = 1e-6;
constexpr double kZLimit = 4.0;
constexpr double kFdStep = 1e-6;
constexpr double kFdTolerance = 1e-6;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int number;
  std::string title;
  double time_limit_s;  // 0 = none
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

CostParams random_cost(RationalStream& s) {
  Rational cs = s.next(q("0"), q("1"));
  Rational cv = s.next(q("0"), q("1/2"));
  return CostParams(cs, cv);
}

Outcome closed_form_vs_oracle(bool block, std::uint64_t seed) {
  const StepDensity d = default_density();
  RationalStream s(seed);
  std::size_t exact_mismatch = 0;
  double max_dev = 0.0;
  const Rational hi = block ? q("2") : q("1");
  for (int k = 0; k < 1000; ++k) {
    const Rational b = s.next(q("0"), hi);
    const CostParams c = random_cost(s);
    const Rational oracle =
        block ? exact_expected(BlockBid(b), c, d) : exact_expected(SimpleBid(b), c, d);
    const Rational closed = block ? expected_block(b, c) : expected_simple(b, c);
    if (closed != oracle) ++exact_mismatch;
    const double fd = block ? expected_block(to_double(b), testing::as_double(c))
                            : expected_simple(to_double(b), testing::as_double(c));
    max_dev = std::max(max_dev, std::abs(fd - to_double(oracle)));
  }
  return {exact_mismatch == 0 && max_dev <= kFloatTolerance,
          "1000 triples, rational mismatches=" + std::to_string(exact_mismatch) +
              ", float max deviation=" + fmt(max_dev)};
}

Outcome multipart_audit() {
  const StepDensity d = default_density();
  double max_dev = 0.0;
  std::size_t exact_mismatch = 0;
  std::size_t points = 0;
  for (int r = 1; r <= 21; ++r) {
    for (const auto& [bs, bv] : region_sample_points(r)) {
      for (const auto& c : audit_costs()) {
        const Rational oracle = exact_expected(MultipartBid(bs, bv), c, d);
        if (multipart_table().form(r).polynomial(bs, bv, c) != oracle) ++exact_mismatch;
        const double v = expected_multipart(to_double(bs), to_double(bv), testing::as_double(c));
        max_dev = std::max(max_dev, std::abs(v - to_double(oracle)));
        ++points;
      }
    }
  }
  const auto unclaimed = multipart_table().unclaimed_expressions();
  std::string list = "none";
  if (!unclaimed.empty()) {
    list.clear();
    for (int id : unclaimed) list += (list.empty() ? "" : " ") + std::to_string(id);
  }
  const Rational anchor = expected_multipart(q("0"), q("0"), CostParams(q("0"), q("0")));
  const bool anchor_ok = anchor == 1 && multipart_region(q("0"), q("0")).label == "1(a)";
  return {max_dev <= kFloatTolerance && exact_mismatch == 0 && anchor_ok,
          std::to_string(points) + " points, max deviation=" + fmt(max_dev) +
              ", exact mismatches=" + std::to_string(exact_mismatch) +
              ", unclaimed printed expressions: " + list +
              ", region 1(a) anchor=" + to_exact_string(anchor)};
}

Outcome continuity() {
  RationalStream s(4);
  std::size_t breaks = 0;
  for (int k = 0; k < 100; ++k) {
    const CostParams c = random_cost(s);
    for (const PiecewisePolynomial* p : {&simple_form(), &block_form()}) {
      for (std::size_t i = 1; i + 1 < p->breakpoints().size(); ++i) {
        const Rational& x = p->breakpoints()[i];
        if (p->pieces()[i - 1](x, c) != p->pieces()[i](x, c)) ++breaks;
      }
    }
  }
  const CostParams spot(q("1/5"), q("1/10"));
  const Rational left = block_form().value(q("1"), spot, Side::kLeft);
  const Rational right = block_form().value(q("1"), spot, Side::kRight);
  const bool spot_ok = left == q("413/960") && right == q("413/960");
  return {breaks == 0 && spot_ok,
          "100 cost pairs x 9 breakpoints, disagreements=" + std::to_string(breaks) +
              ", E_B(1; 1/5, 1/10) left=" + to_exact_string(left) +
              " right=" + to_exact_string(right)};
}

Outcome monte_carlo() {
  const StepDensity d = default_density();
  const std::vector<std::pair<Bid, CostParams>> points = {
      {SimpleBid(q("0")), CostParams(q("0"), q("0"))},
      {SimpleBid(q("1/8")), CostParams(q("1/10"), q("1/20"))},
      {SimpleBid(q("1/2")), CostParams(q("1/10"), q("1/10"))},
      {SimpleBid(q("0.6")), CostParams(q("0.4"), q("0.2"))},
      {SimpleBid(q("0.8")), CostParams(q("0.9"), q("0.05"))},
      {SimpleBid(q("1/4"), q("3/4")), CostParams(q("0.3"), q("0.1"))},
      {BlockBid(q("0")), CostParams(q("0.2"), q("0.2"))},
      {BlockBid(q("0.4")), CostParams(q("0.5"), q("0"))},
      {BlockBid(q("1")), CostParams(q("1/5"), q("1/10"))},
      {BlockBid(q("1.3")), CostParams(q("0.7"), q("0.3"))},
      {BlockBid(q("1.6")), CostParams(q("0.05"), q("0.45"))},
      {BlockBid(q("1.9")), CostParams(q("1"), q("0"))},
      {MultipartBid(q("0.3"), q("0.1")), CostParams(q("0.1"), q("0.1"))},
      {MultipartBid(q("0"), q("0")), CostParams(q("0.3"), q("0.3"))},
      {MultipartBid(q("0.1"), q("0.4")), CostParams(q("0.2"), q("0.1"))},
      {MultipartBid(q("0.5"), q("0.25")), CostParams(q("1/2"), q("1/4"))},
      {MultipartBid(q("0.9"), q("0.2")), CostParams(q("0.8"), q("0.15"))},
      {MultipartBid(q("0.05"), q("0.85")), CostParams(q("0.05"), q("0.4"))},
      {MultipartBid(q("1.2"), q("0.3")), CostParams(q("0.6"), q("0.05"))},
      {MultipartBid(q("0.2"), q("0.6")), CostParams(q("0"), q("0.5"))},
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& [bid, c] = points[i];
    const McEstimate m = mc_expected(bid, c, d, 1000000, 1000 + i);
    const double exact = to_double(exact_expected(bid, c, d));
    const double z = m.standard_error > 0 ? (m.estimate - exact) / m.standard_error
                                          : (m.estimate == exact ? 0.0 : INFINITY);
    worst = std::max(worst, std::abs(z));
  }
  return {worst <= kZLimit, "20 points, n=10^6, max |z|=" + fmt(worst)};
}

Outcome dominance() {
  const auto rows = run_sweep(SweepSpec{});
  std::size_t violations = 0;
  std::size_t max_differs = 0;
  for (const auto& row : rows) {
    const auto& s = *row.of(BidFormat::kSimple);
    const auto& b = *row.of(BidFormat::kBlock);
    const auto& m = *row.of(BidFormat::kMultipart);
    if (m.value < s.value - kDominanceTolerance || m.value < b.value - kDominanceTolerance) {
      ++violations;
    }
    const double combined = std::max({s.value, b.value, m.value});
    if (combined != m.value) ++max_differs;
  }
  return {rows.size() == 441 && violations == 0 && max_differs == 0,
          std::to_string(rows.size()) + " grid points, dominance violations=" +
              std::to_string(violations) + ", max grid differs from multipart at " +
              std::to_string(max_differs)};
}

Outcome optimizer_soundness() {
  RationalStream s(7);
  std::size_t failures = 0;
  double worst = 0.0;  // largest amount by which a scan beat the optimizer
  for (int k = 0; k < 50; ++k) {
    const CostParams c = random_cost(s);
    const double gaps[3] = {testing::grid_best_simple(c, 4096) - optimize_simple(c).value,
                            testing::grid_best_block(c, 4096) - optimize_block(c).value,
                            testing::grid_best_multipart(c, 512) - optimize_multipart(c).value};
    if (gaps[0] > kScanTolerance1d || gaps[1] > kScanTolerance1d || gaps[2] > kScanTolerance2d) {
      ++failures;
    }
    worst = std::max({worst, gaps[0], gaps[1], gaps[2]});
  }
  return {failures == 0, "50 cost pairs, failures=" + std::to_string(failures) +
                             ", max scan excess=" + fmt(worst)};
}

Outcome anchors() {
  std::string detail;
  bool ok = true;
  for (const auto& [c, want] : {std::pair{CostParams(q("0"), q("0")), q("1")},
                                std::pair{CostParams(q("2"), q("0")), q("0")}}) {
    for (const auto& r : {optimize_simple(c), optimize_block(c), optimize_multipart(c)}) {
      ok = ok && r.exact_value == want;
      detail += (detail.empty() ? "" : " ") + to_string(r.format) + "(" +
                to_exact_string(c.startup) + "," + to_exact_string(c.variable) +
                ")=" + to_exact_string(r.exact_value);
    }
  }
  return {ok, detail};
}

Outcome derivatives() {
  RationalStream s(9);
  // Interior: at least 2h away from every breakpoint, so the centred
  // difference never straddles a kink.
  auto interior_point = [&s](const PiecewisePolynomial& p) {
    while (true) {
      const double x = to_double(s.next(p.lower(), p.upper()));
      bool clear = true;
      for (const auto& bp : p.breakpoints()) {
        clear = clear && std::abs(x - to_double(bp)) > 2 * kFdStep;
      }
      if (clear) return x;
    }
  };
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto c = testing::as_double(random_cost(s));
    const double b = interior_point(simple_form());
    worst = std::max(worst, std::abs(d_expected_simple(b, c) -
                                      (expected_simple(b + kFdStep, c) -
                                       expected_simple(b - kFdStep, c)) / (2 * kFdStep)));
    const double t = interior_point(block_form());
    worst = std::max(worst, std::abs(d_expected_block(t, c) -
                                      (expected_block(t + kFdStep, c) -
                                       expected_block(t - kFdStep, c)) / (2 * kFdStep)));
  }

  // The three printed stationary candidates, each tested on its own piece of
  // the printed derivative when it lies inside that piece.
  const auto& dprinted = printed::simple_derivative();
  const auto& bp = dprinted.breakpoints();
  std::size_t interior[3] = {0, 0, 0};
  std::size_t nonzero[3] = {0, 0, 0};
  std::size_t corrected_interior = 0;  // sign-flipped middle candidate, for the report
  std::size_t corrected_nonzero = 0;
  RationalStream cs_stream(10);
  for (int k = 0; k < 1000; ++k) {
    const CostParams c = random_cost(cs_stream);
    const Rational& cs = c.startup;
    const Rational& cv = c.variable;
    std::optional<Rational> cand[3];
    if (cs != 2) cand[0] = -2 * cv / (cs - 2);
    if (6 * cs - 4 != 0) cand[1] = (-cs + 4 * cv) / (6 * cs - 4);
    if (cs != 2) cand[2] = (-cs - 2 * cv) / (cs - 2);
    if (cand[1]) {
      const Rational root = -*cand[1];
      if (root > bp[1] && root < bp[2]) {
        ++corrected_interior;
        if (dprinted.pieces()[1](root, c) != 0) ++corrected_nonzero;
      }
    }
    for (int i = 0; i < 3; ++i) {
      if (!cand[i]) continue;
      const Rational& x = *cand[i];
      const bool inside = x > bp[i] && x < bp[i + 1];
      if (!inside) continue;
      ++interior[i];
      if (dprinted.pieces()[i](x, c) != 0) ++nonzero[i];
    }
  }
  const bool fd_ok = worst <= kFdTolerance;
  const bool stationary_ok = nonzero[0] + nonzero[1] + nonzero[2] == 0;
  std::string detail = "1000 points, max |d - fd|=" + fmt(worst) + "; printed candidates";
  const char* names[3] = {"-2cv/(cs-2)", "(-cs+4cv)/(6cs-4)", "(-cs-2cv)/(cs-2)"};
  for (int i = 0; i < 3; ++i) {
    detail += std::string(i ? ", " : " ") + names[i] + " interior " + std::to_string(interior[i]) +
              " nonzero " + std::to_string(nonzero[i]);
  }
  if (nonzero[1] > 0) {
    detail +=
        "; the printed middle candidate is the negative of the root (cs-4cv)/(6cs-4) of the "
        "printed middle derivative, so it cannot zero it (that root: interior " +
        std::to_string(corrected_interior) + " nonzero " + std::to_string(corrected_nonzero) + ")";
  }
  return {fd_ok && stationary_ok, detail};
}

}  // namespace
}  // namespace stepbid

int main() {
  using namespace stepbid;
  const std::vector<Criterion> criteria = {
      {1, "simple closed form vs exact oracle", 30, [] { return closed_form_vs_oracle(false, 1); }},
      {2, "block closed form vs exact oracle", 30, [] { return closed_form_vs_oracle(true, 2); }},
      {3, "multi-part region audit", 0, multipart_audit},
      {4, "continuity at breakpoints", 0, continuity},
      {5, "Monte Carlo consistency", 60, monte_carlo},
      {6, "multi-part dominance on the default grid", 300, dominance},
      {7, "optimizer vs dense grid scans", 0, optimizer_soundness},
      {8, "degenerate cost anchors", 0, anchors},
      {9, "derivatives and stationary candidates", 0, derivatives},
  };
  // Warm the multi-part table so its one-off build is not charged to a criterion.
  (void)multipart_table();
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      o.pass = false;
      o.detail += "; exceeded " + fmt(c.time_limit_s) + " s";
    }
    if (!o.pass) ++failed;
    std::printf("criterion %d: %s %s (%s) [%.2f s]\n", c.number, o.pass ? "PASS" : "FAIL",
                c.title.c_str(), o.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
