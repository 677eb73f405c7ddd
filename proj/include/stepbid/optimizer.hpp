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

// Expected-profit maximization for each bid format under the reference
// density, and the format comparison.

#ifndef STEPBID_OPTIMIZER_HPP_
#define STEPBID_OPTIMIZER_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "stepbid/payoff.hpp"
#include "stepbid/rational.hpp"

namespace stepbid {

enum class CandidateKind { kEndpoint, kBreakpoint, kStationary, kGrid, kPolished };

std::string_view to_string(CandidateKind kind);

struct Candidate {
  Rational x;  // b, or bs for multi-part
  Rational y;  // bv for multi-part, 0 otherwise
  double value = 0.0;
  CandidateKind kind = CandidateKind::kEndpoint;
  std::string note;
};

struct OptimizationResult {
  BidFormat format = BidFormat::kSimple;
  Rational x;  // b*, or bs*
  Rational y;  // bv*, multi-part only
  Rational exact_value;  // expected profit at the optimal bid, exactly
  double value = 0.0;
  std::vector<Candidate> candidates;

  Bid bid() const;
};

// Closed candidate set: 0, 1/4, 3/4, 1 and the piecewise stationary points
// that fall inside their own piece. Both the printed and the corrected
// middle-piece candidate are evaluated. Ties go to the smaller b.
OptimizationResult optimize_simple(const CostParams& c);

// Quarter breakpoints of [0,2], c_s + 2 c_v when inside [0,2], and every
// root of each derivative piece that falls inside its piece. Ties go to the
// smaller b.
OptimizationResult optimize_block(const CostParams& c);

// Region-wise search: vertices, interior stationary points (Newton on the
// gradient), optima of the cubic restriction to each edge, and a 1/64 grid;
// the best points are then polished by compass search down to a 1e-12 step.
// Values within 1e-9 of the best are re-ranked exactly; ties go to the
// lexicographically smaller (bs, bv).
OptimizationResult optimize_multipart(const CostParams& c);

struct FormatComparison {
  OptimizationResult simple;
  OptimizationResult block;
  OptimizationResult multipart;
  double ratio_simple = 1.0;  // E*_S / E*_M, 1 when both are 0
  double ratio_block = 1.0;   // E*_B / E*_M, 1 when both are 0
  BidFormat best = BidFormat::kMultipart;
};

// Optima within kTieTolerance of each other count as tied; ties prefer
// multi-part, then block, then simple.
inline constexpr double kTieTolerance = 1e-12;
FormatComparison best_format(const CostParams& c);

}  // namespace stepbid

#endif  // STEPBID_OPTIMIZER_HPP_
