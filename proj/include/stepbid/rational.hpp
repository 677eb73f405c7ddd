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

#ifndef STEPBID_RATIONAL_HPP_
#define STEPBID_RATIONAL_HPP_

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace stepbid {

// Arbitrary precision rational. All exact arithmetic in the library goes
// through this type; doubles only appear at API edges and in optimizers.
using Rational = mpq_class;

// p/q in canonical form (mpq_class(p, q) alone is not canonicalized).
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

// Parses "p/q", an integer, or a decimal literal ("0.125", "-2.5e-3") into an
// exact rational. Decimals are interpreted exactly as written, so "0.1" is
// 1/10, not the nearest double. Throws std::invalid_argument on bad input.
Rational parse_rational(std::string_view text);

// Exact conversion of a finite double (every double is a dyadic rational).
Rational from_double(double value);

double to_double(const Rational& value);

// "p/q" (or "p" when the denominator is 1).
std::string to_exact_string(const Rational& value);

// 12 significant digits, the common numeric output format.
std::string to_display_string(double value);
std::string to_display_string(const Rational& value);

}  // namespace stepbid

#endif  // STEPBID_RATIONAL_HPP_
