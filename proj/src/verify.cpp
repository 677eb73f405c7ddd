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

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "stepbid/closedform.hpp"
#include "stepbid/distribution.hpp"
#include "stepbid/oracle.hpp"

namespace stepbid {

std::uint64_t RationalStream::draw() {
  // Top 53 bits of the counter stream, as an integer.
  return static_cast<std::uint64_t>(CounterRng::uniform_at(seed_, index_++) * 9007199254740992.0);
}

Rational RationalStream::next(const Rational& lo, const Rational& hi) {
  const long den = 1 + static_cast<long>(draw() % static_cast<std::uint64_t>(max_den_));
  const long num = static_cast<long>(draw() % static_cast<std::uint64_t>(den + 1));
  return lo + (hi - lo) * ratio(num, den);
}

std::vector<std::pair<Rational, Rational>> region_sample_points(int region_index) {
  const MultipartRegion& r = multipart_regions().at(region_index - 1);
  static constexpr int kOffsets[5][2] = {{1, 1}, {1, 3}, {2, 2}, {3, 1}, {3, 3}};
  std::vector<std::pair<Rational, Rational>> out;
  for (const auto& [a, b] : kOffsets) {
    Rational bv = r.bv_lo + (r.bv_hi - r.bv_lo) * ratio(a, 4);
    Rational lo = r.bs_lo.at(bv);
    Rational bs = lo + (r.bs_hi.at(bv) - lo) * ratio(b, 4);
    out.emplace_back(bs, bv);
  }
  return out;
}

const std::vector<CostParams>& audit_costs() {
  static const std::vector<CostParams> costs = {
      CostParams(0, 0), CostParams(ratio(1, 5), ratio(1, 10)), CostParams(ratio(3, 4), ratio(1, 8))};
  return costs;
}

bool VerifyReport::ok() const {
  bool good = std::all_of(checks.begin(), checks.end(),
                          [](const CheckLine& c) { return c.pass || !c.gating; });
  for (const auto& r : regions) good = good && r.fit_verified && r.max_deviation <= kVerifyTolerance;
  return good;
}

namespace {

double abs_double(const Rational& v) { return std::abs(to_double(v)); }

double max_abs(const AffineCoef& a) {
  return std::max({abs_double(a.constant), abs_double(a.startup), abs_double(a.variable)});
}

// Closed form against the oracle at random and breakpoint arguments, in
// rational and in double arithmetic.
template <class Exact, class Float>
void univariate_checks(VerifyReport& report, const std::string& name, const Rational& upper,
                       const std::vector<Rational>& breakpoints, Bid (*make)(const Rational&),
                       Exact exact, Float floating, std::uint64_t seed, std::size_t n) {
  const StepDensity density = default_density();
  CheckLine rational_line;
  rational_line.name = name + " closed form vs oracle (rational)";
  CheckLine double_line;
  double_line.name = name + " closed form vs oracle (double)";
  auto check = [&](const Rational& b, const CostParams& c) {
    const Rational oracle = exact_expected(make(b), c, density);
    const Rational closed = exact(b, c);
    rational_line.max_deviation = std::max(rational_line.max_deviation, abs_double(closed - oracle));
    rational_line.pass = rational_line.pass && closed == oracle;
    ++rational_line.points;
    const double f = floating(to_double(b), BasicCost<double>(to_double(c.startup), to_double(c.variable)));
    const double dev = std::abs(f - to_double(oracle));
    double_line.max_deviation = std::max(double_line.max_deviation, dev);
    double_line.pass = double_line.pass && dev <= kVerifyTolerance;
    ++double_line.points;
  };
  RationalStream stream(seed);
  for (std::size_t i = 0; i < n; ++i) {
    Rational b = stream.next(0, upper);
    Rational cs = stream.next(0, 1);
    Rational cv = stream.next(0, ratio(1, 2));
    check(b, CostParams(cs, cv));
  }
  for (const auto& b : breakpoints) {
    for (const auto& c : audit_costs()) check(b, c);
  }
  report.checks.push_back(rational_line);
  report.checks.push_back(double_line);
}

void continuity_checks(VerifyReport& report, const std::string& name,
                       const PiecewisePolynomial& form) {
  const auto& bp = form.breakpoints();
  for (std::size_t i = 1; i + 1 < bp.size(); ++i) {
    const AffineCoef jump = form.jump_at(i);
    CheckLine line;
    line.name = name + " continuity at b = " + to_exact_string(bp[i]);
    line.points = 1;
    line.max_deviation = max_abs(jump);
    line.pass = jump.is_zero();
    if (!line.pass) line.detail = "jump " + to_string(jump);
    report.checks.push_back(line);
  }
}

void printed_audits(VerifyReport& report) {
  // Printed simple derivative against the derivative of the pieces.
  {
    CheckLine line;
    line.name = "printed simple derivative vs differentiated pieces";
    line.gating = false;
    const auto& printed = printed::simple_derivative().pieces();
    for (std::size_t i = 0; i < printed.size(); ++i) {
      ++line.points;
      if (!(printed[i] == simple_form().derivative_piece(i))) {
        line.pass = false;
        line.detail += "piece " + std::to_string(i) + " differs; ";
      }
    }
    report.checks.push_back(line);
  }
  // Printed block pieces against the implemented (oracle-checked) pieces.
  {
    CheckLine line;
    line.name = "printed block pieces vs implemented pieces";
    line.gating = false;
    const auto& printed = printed::block_expected().pieces();
    const auto& implemented = block_form().pieces();
    for (std::size_t i = 0; i < printed.size(); ++i) {
      ++line.points;
      if (printed[i] == implemented[i]) continue;
      line.pass = false;
      const Polynomial diff = printed[i] - implemented[i];
      line.detail += "piece [" + to_exact_string(block_form().breakpoints()[i]) + "," +
                     to_exact_string(block_form().breakpoints()[i + 1]) +
                     ") printed - implemented = " + to_string(diff) + "; ";
      for (const auto& c : diff.coefficients()) {
        line.max_deviation = std::max(line.max_deviation, max_abs(c));
      }
    }
    report.checks.push_back(line);
  }
  // Well-formed printed block derivative pieces.
  {
    CheckLine line;
    line.name = "printed block derivative (well-formed pieces) vs differentiated pieces";
    line.gating = false;
    const auto& printed = printed::block_derivative();
    for (std::size_t i = 0; i < printed.size(); ++i) {
      if (!printed[i]) continue;
      ++line.points;
      if (!(*printed[i] == block_form().derivative_piece(i))) {
        line.pass = false;
        line.detail += "piece " + std::to_string(i) + " differs; ";
      }
    }
    report.checks.push_back(line);
  }
  // Printed middle-piece stationary candidate (c_s - 4 c_v) / (6 c_s - 4) sign.
  {
    CheckLine line;
    line.name = "printed simple stationary candidate, piece [1/4,3/4)";
    line.gating = false;
    const Polynomial& d = printed::simple_derivative().pieces()[1];
    RationalStream stream(99);
    for (int i = 0; i < 20; ++i) {
      Rational cs = stream.next(0, 1);
      const CostParams c(cs, stream.next(0, ratio(1, 2)));
      const Rational den = 6 * c.startup - 4;
      if (den == 0) continue;
      const Rational b = (-c.startup + 4 * c.variable) / den;
      const Rational residual = d(b, c);
      ++line.points;
      line.max_deviation = std::max(line.max_deviation, abs_double(residual));
      if (residual != 0) line.pass = false;
    }
    if (!line.pass) {
      line.detail = "the printed value is the negative of the root (c_s - 4 c_v)/(6 c_s - 4)";
    }
    report.checks.push_back(line);
  }
}

}  // namespace

VerifyReport run_verify(std::uint64_t seed, std::size_t random_points) {
  VerifyReport report;
  std::vector<Rational> quarter_points;
  for (int i = 0; i <= 8; ++i) quarter_points.push_back(ratio(i, 4));

  univariate_checks(
      report, "simple", Rational(1), simple_form().breakpoints(),
      [](const Rational& b) { return Bid(SimpleBid(b)); },
      [](const Rational& b, const CostParams& c) { return expected_simple(b, c); },
      [](double b, const BasicCost<double>& c) { return expected_simple(b, c); }, seed,
      random_points);
  univariate_checks(
      report, "block", Rational(2), quarter_points,
      [](const Rational& b) { return Bid(BlockBid(b)); },
      [](const Rational& b, const CostParams& c) { return expected_block(b, c); },
      [](double b, const BasicCost<double>& c) { return expected_block(b, c); }, seed + 1,
      random_points);
  continuity_checks(report, "simple", simple_form());
  continuity_checks(report, "block", block_form());

  const StepDensity density = default_density();
  const MultipartTable& table = multipart_table();
  for (const auto& region : multipart_regions()) {
    const RegionForm& form = table.form(region.index);
    RegionLine line;
    line.index = region.index;
    line.label = region.label;
    line.printed_id = form.printed_id;
    line.matching_ids = form.matching_ids;
    line.fit_verified = form.fit_verified;
    for (const auto& [bs, bv] : region_sample_points(region.index)) {
      for (const auto& c : audit_costs()) {
        const Rational oracle = exact_expected(Bid(MultipartBid(bs, bv)), c, density);
        line.max_deviation =
            std::max(line.max_deviation, abs_double(expected_multipart(bs, bv, c) - oracle));
      }
    }
    report.regions.push_back(line);
  }
  report.unclaimed = table.unclaimed_expressions();
  report.rederived = table.rederived_regions();

  printed_audits(report);
  return report;
}

void print_report(std::ostream& out, const VerifyReport& report) {
  auto flag = [](bool pass, bool gating) {
    if (pass) return "ok  ";
    return gating ? "FAIL" : "diff";
  };
  out << "closed-form checks (tolerance " << kVerifyTolerance << ")\n";
  for (const auto& c : report.checks) {
    if (!c.gating) continue;
    out << "  [" << flag(c.pass, true) << "] " << c.name << ": points=" << c.points
        << " max_deviation=" << to_display_string(c.max_deviation);
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << '\n';
  }

  out << "multi-part regions (5 interior points x " << audit_costs().size() << " cost pairs)\n";
  out << "  region  label   printed  matches         fit  max_deviation\n";
  for (const auto& r : report.regions) {
    std::string matches;
    for (int id : r.matching_ids) matches += (matches.empty() ? "" : ",") + std::to_string(id);
    if (matches.empty()) matches = "-";
    out << "  " << std::setw(6) << r.index << "  " << std::setw(5) << r.label << "  "
        << std::setw(8) << (r.printed_id ? std::to_string(*r.printed_id) : "refit") << "  "
        << std::left << std::setw(14) << matches << std::right << "  "
        << (r.fit_verified ? "ok " : "bad") << "  " << to_display_string(r.max_deviation) << '\n';
  }
  out << "  unclaimed printed expressions: ";
  if (report.unclaimed.empty()) out << "none";
  for (std::size_t i = 0; i < report.unclaimed.size(); ++i) {
    out << (i ? "," : "") << report.unclaimed[i];
  }
  out << "\n  regions re-derived from the oracle: ";
  if (report.rederived.empty()) out << "none";
  for (std::size_t i = 0; i < report.rederived.size(); ++i) {
    out << (i ? "," : "") << report.rederived[i];
  }
  out << '\n';

  out << "printed-expression audit (informational)\n";
  for (const auto& c : report.checks) {
    if (c.gating) continue;
    out << "  [" << flag(c.pass, false) << "] " << c.name << ": points=" << c.points;
    std::string detail = c.detail;
    while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
    if (!detail.empty()) out << " (" << detail << ")";
    out << '\n';
  }
  out << "result: " << (report.ok() ? "PASS" : "FAIL") << '\n';
}

}  // namespace stepbid
