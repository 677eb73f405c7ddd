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

#ifndef STEPBID_SWEEP_HPP_
#define STEPBID_SWEEP_HPP_

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "stepbid/optimizer.hpp"
#include "stepbid/rational.hpp"

namespace stepbid {

struct RangeSpec {
  Rational lo;
  Rational hi;
  Rational step;

  // lo, lo + step, ... up to and including hi when it is hit exactly.
  std::vector<Rational> values() const;
};

// "lo:hi:step", each part decimal or p/q. Throws std::invalid_argument
// unless lo <= hi and step > 0.
RangeSpec parse_range(std::string_view text);

struct SweepSpec {
  RangeSpec cs{Rational(0), Rational(1), ratio(1, 20)};
  RangeSpec cv{Rational(0), ratio(1, 2), ratio(1, 40)};
  std::array<bool, 3> formats{true, true, true};  // indexed by BidFormat
  unsigned workers = 0;                           // 0 = hardware concurrency

  bool includes(BidFormat f) const { return formats[static_cast<int>(f)]; }
};

// Comma-separated subset of "simple,block,multipart".
std::array<bool, 3> parse_formats(std::string_view text);

struct SweepRow {
  Rational cs;
  Rational cv;
  std::array<std::optional<OptimizationResult>, 3> optimum;  // by BidFormat
  std::optional<double> ratio_simple;                        // needs simple and multi-part
  std::optional<double> ratio_block;                         // needs block and multi-part
  std::optional<BidFormat> best;                             // among included formats

  const std::optional<OptimizationResult>& of(BidFormat f) const {
    return optimum[static_cast<int>(f)];
  }
};

// Rows in c_s-major order, computed in parallel.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr std::string_view kSweepHeader =
    "cs,cv,Es,bS,Eb,bB,Em,bsM,bvM,ratio_S_M,ratio_B_M,best";

// Header plus one line per row; excluded formats leave their columns empty.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool exact);

}  // namespace stepbid

#endif  // STEPBID_SWEEP_HPP_
