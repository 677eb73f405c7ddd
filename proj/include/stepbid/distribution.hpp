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

#ifndef STEPBID_DISTRIBUTION_HPP_
#define STEPBID_DISTRIBUTION_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "stepbid/rational.hpp"

namespace stepbid {

/**
 * Piecewise-constant probability density of a clearing price on [0,1].
 *
 * Interval i is the half-open [breakpoints[i], breakpoints[i+1]) with height
 * values[i]; the density is 0 outside [0,1) so pdf(1) == 0. Instances are
 * immutable once constructed and safe to share between threads.
 */
class StepDensity {
 public:
  // Throws std::invalid_argument unless breakpoints run strictly increasing
  // from 0 to 1, there is one nonnegative value per interval, and the total
  // mass is exactly 1.
  StepDensity(std::vector<Rational> breakpoints, std::vector<Rational> values);

  std::span<const Rational> breakpoints() const { return breakpoints_; }
  std::span<const Rational> values() const { return values_; }
  std::size_t interval_count() const { return values_.size(); }

  // Mass of the intervals strictly before interval i (cdf at breakpoints[i]).
  const Rational& mass_before(std::size_t i) const { return cumulative_[i]; }

  // Index of the interval containing x under the half-open convention, or
  // interval_count() if x lies outside [0,1).
  std::size_t interval_of(const Rational& x) const;

  bool operator==(const StepDensity& other) const = default;

 private:
  std::vector<Rational> breakpoints_;
  std::vector<Rational> values_;
  std::vector<Rational> cumulative_;
};

// Heights 1/2, 3/2, 1/2 on [0,1/4), [1/4,3/4), [3/4,1).
StepDensity default_density();

// Density with a single interval of height 1.
StepDensity uniform_density();

Rational pdf(const StepDensity& d, const Rational& x);

// Integral of the density from 0 to x, clamped to [0,1].
Rational cdf(const StepDensity& d, const Rational& x);

// Integral of t * pdf(t) over [a, b]. Throws std::invalid_argument if a > b.
Rational partial_first_moment(const StepDensity& d, const Rational& a,
                              const Rational& b);

// Smallest x in [0,1] with cdf(x) >= u. Throws std::invalid_argument unless
// 0 <= u <= 1.
Rational inverse_cdf(const StepDensity& d, const Rational& u);

/**
 * Counter-based uniform stream. Variate i of a stream is a pure function of
 * (seed, i), so a range of indices can be split across workers and still
 * reproduce the sequential result bit for bit.
 */
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t start_index = 0)
      : seed_(seed), index_(start_index) {}

  // 53-bit uniform on [0,1).
  static double uniform_at(std::uint64_t seed, std::uint64_t index);

  double uniform() { return uniform_at(seed_, index_++); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t index() const { return index_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
};

// Floating-point inverse-CDF sampler built once from a StepDensity.
class Sampler {
 public:
  explicit Sampler(const StepDensity& d);

  // Draw in [0,1). u must lie in [0,1).
  double inverse_cdf(double u) const;

  double operator()(CounterRng& rng) const { return inverse_cdf(rng.uniform()); }

 private:
  std::vector<double> starts_;
  std::vector<double> heights_;
  std::vector<double> cumulative_;  // cdf at starts_[i]
  std::vector<double> ends_;
};

double sample(const StepDensity& d, CounterRng& rng);

// Density file: a line "breakpoints = r0,...,rk" and a line
// "values = v1,...,vk"; blank lines and lines starting with '#' are ignored.
// Throws std::invalid_argument on malformed content and std::runtime_error if
// the file cannot be read.
StepDensity parse_density(std::string_view text);
StepDensity load_density(const std::filesystem::path& path);

}  // namespace stepbid

#endif  // STEPBID_DISTRIBUTION_HPP_
