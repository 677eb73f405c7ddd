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

// Realized-profit kernels for one price scenario. Every type is a template
// over the scalar so the same rules serve exact (Rational) evaluation and the
// double-precision Monte Carlo path. Acceptance ties (price == threshold)
// are always accepted.

#ifndef STEPBID_PAYOFF_HPP_
#define STEPBID_PAYOFF_HPP_

#include <stdexcept>
#include <string>
#include <variant>

#include "stepbid/rational.hpp"

namespace stepbid {

enum class BidFormat { kSimple, kBlock, kMultipart };

std::string to_string(BidFormat format);
// Accepts "simple", "block", "multipart"; throws std::invalid_argument.
BidFormat parse_format(const std::string& name);

template <class T>
struct BasicCost {
  T startup;   // c_s, paid once whenever the unit runs in any period
  T variable;  // c_v, paid per period of production

  BasicCost(T startup_cost, T variable_cost)
      : startup(std::move(startup_cost)), variable(std::move(variable_cost)) {
    if (startup < 0 || variable < 0) {
      throw std::invalid_argument("costs must be nonnegative");
    }
  }

  // Cost of running in both periods.
  T full() const { return T(startup + 2 * variable); }

  bool operator==(const BasicCost&) const = default;
};

template <class T>
struct BasicScenario {
  T p1;
  T p2;

  BasicScenario(T period1, T period2)
      : p1(std::move(period1)), p2(std::move(period2)) {
    if (p1 < 0 || p1 > 1 || p2 < 0 || p2 > 1) {
      throw std::invalid_argument("clearing prices must lie in [0,1]");
    }
  }
};

// Independent per-period price bids.
template <class T>
struct BasicSimpleBid {
  T price1;
  T price2;

  BasicSimpleBid(T first, T second)
      : price1(std::move(first)), price2(std::move(second)) {
    if (price1 < 0 || price1 > 1 || price2 < 0 || price2 > 1) {
      throw std::invalid_argument("simple bid prices must lie in [0,1]");
    }
  }
  // Same price in both periods.
  explicit BasicSimpleBid(T both) : BasicSimpleBid(both, both) {}
};

// All-or-nothing bid on the two-period income.
template <class T>
struct BasicBlockBid {
  T threshold;

  explicit BasicBlockBid(T b) : threshold(std::move(b)) {
    if (threshold < 0 || threshold > 2) {
      throw std::invalid_argument("block bid threshold must lie in [0,2]");
    }
  }
};

// Declared start-up and variable components.
template <class T>
struct BasicMultipartBid {
  T startup;
  T variable;

  BasicMultipartBid(T bs, T bv) : startup(std::move(bs)), variable(std::move(bv)) {
    if (startup < 0 || variable < 0 || variable > 1 ||
        startup + 2 * variable > 2) {
      throw std::invalid_argument(
          "multipart bid needs bs >= 0, 0 <= bv <= 1 and bs + 2 bv <= 2");
    }
  }
};

using CostParams = BasicCost<Rational>;
using PriceScenario = BasicScenario<Rational>;
using SimpleBid = BasicSimpleBid<Rational>;
using BlockBid = BasicBlockBid<Rational>;
using MultipartBid = BasicMultipartBid<Rational>;
using Bid = std::variant<SimpleBid, BlockBid, MultipartBid>;

BidFormat format_of(const Bid& bid);

template <class T>
T generation_cost(int periods_on, const BasicCost<T>& c) {
  switch (periods_on) {
    case 0:
      return T(0);
    case 1:
      return T(c.startup + c.variable);
    case 2:
      return T(c.startup + 2 * c.variable);
    default:
      throw std::invalid_argument("periods_on must be 0, 1 or 2");
  }
}

template <class T>
T simple_profit(const BasicSimpleBid<T>& bid, const BasicScenario<T>& s,
                const BasicCost<T>& c) {
  const bool first = s.p1 >= bid.price1;
  const bool second = s.p2 >= bid.price2;
  if (first && second) return T(s.p1 + s.p2 - generation_cost(2, c));
  if (first) return T(s.p1 - generation_cost(1, c));
  if (second) return T(s.p2 - generation_cost(1, c));
  return T(0);
}

template <class T>
T block_profit(const BasicBlockBid<T>& bid, const BasicScenario<T>& s,
               const BasicCost<T>& c) {
  if (s.p1 + s.p2 >= bid.threshold) return T(s.p1 + s.p2 - generation_cost(2, c));
  return T(0);
}

// Branches are tested in the printed order; they are pairwise disjoint.
template <class T>
T multipart_profit(const BasicMultipartBid<T>& bid, const BasicScenario<T>& s,
                   const BasicCost<T>& c) {
  const T& bs = bid.startup;
  const T& bv = bid.variable;
  if (s.p1 >= bs + bv && s.p2 < bv) return T(s.p1 - generation_cost(1, c));
  if (s.p1 < bv && s.p2 >= bs + bv) return T(s.p2 - generation_cost(1, c));
  if (s.p1 >= bv && s.p2 >= bv && s.p1 + s.p2 >= bs + 2 * bv) {
    return T(s.p1 + s.p2 - generation_cost(2, c));
  }
  return T(0);
}

}  // namespace stepbid

#endif  // STEPBID_PAYOFF_HPP_
