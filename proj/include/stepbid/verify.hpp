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

// Closed form versus exact oracle: the discrepancy report behind `verify`.

#ifndef STEPBID_VERIFY_HPP_
#define STEPBID_VERIFY_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "stepbid/payoff.hpp"
#include "stepbid/rational.hpp"

namespace stepbid {

// Deterministic stream of rationals with bounded denominators.
class RationalStream {
 public:
  explicit RationalStream(std::uint64_t seed, long max_denominator = 1000)
      : seed_(seed), max_den_(max_denominator) {}

  // Uniform-ish rational in [lo, hi].
  Rational next(const Rational& lo, const Rational& hi);

 private:
  std::uint64_t draw();

  std::uint64_t seed_;
  long max_den_;
  std::uint64_t index_ = 0;
};

// Five interior points of a region, as (bs, bv).
std::vector<std::pair<Rational, Rational>> region_sample_points(int region_index);

// Cost pairs used by the region audit.
const std::vector<CostParams>& audit_costs();

struct CheckLine {
  std::string name;
  std::size_t points = 0;
  double max_deviation = 0.0;
  bool pass = true;
  bool gating = true;  // false for audits of printed expressions
  std::string detail;
};

struct RegionLine {
  int index = 0;
  std::string label;
  std::optional<int> printed_id;
  std::vector<int> matching_ids;
  bool fit_verified = false;
  double max_deviation = 0.0;
};

struct VerifyReport {
  std::vector<CheckLine> checks;
  std::vector<RegionLine> regions;
  std::vector<int> unclaimed;
  std::vector<int> rederived;

  // True iff every gating check passed.
  bool ok() const;
};

inline constexpr double kVerifyTolerance = 1e-12;

VerifyReport run_verify(std::uint64_t seed = 1, std::size_t random_points = 1000);
void print_report(std::ostream& out, const VerifyReport& report);

}  // namespace stepbid

#endif  // STEPBID_VERIFY_HPP_
