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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace stepbid {

StepDensity::StepDensity(std::vector<Rational> breakpoints,
                         std::vector<Rational> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() < 2) {
    throw std::invalid_argument("density needs at least two breakpoints");
  }
  if (values_.size() + 1 != breakpoints_.size()) {
    throw std::invalid_argument(
        "density needs exactly one value per interval");
  }
  if (breakpoints_.front() != 0 || breakpoints_.back() != 1) {
    throw std::invalid_argument("density breakpoints must run from 0 to 1");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] < breakpoints_[i + 1])) {
      throw std::invalid_argument(
          "density breakpoints must be strictly increasing");
    }
  }
  cumulative_.reserve(breakpoints_.size());
  Rational mass = 0;
  cumulative_.push_back(mass);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0) {
      throw std::invalid_argument("density values must be nonnegative");
    }
    mass += values_[i] * (breakpoints_[i + 1] - breakpoints_[i]);
    cumulative_.push_back(mass);
  }
  if (mass != 1) {
    throw std::invalid_argument("density must integrate to 1, got " +
                                to_exact_string(mass));
  }
}

std::size_t StepDensity::interval_of(const Rational& x) const {
  if (x < 0 || x >= 1) return interval_count();
  // First breakpoint strictly greater than x closes x's interval.
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

StepDensity default_density() {
  return StepDensity({Rational(0), Rational(1, 4), Rational(3, 4), Rational(1)},
                     {Rational(1, 2), Rational(3, 2), Rational(1, 2)});
}

StepDensity uniform_density() {
  return StepDensity({Rational(0), Rational(1)}, {Rational(1)});
}

Rational pdf(const StepDensity& d, const Rational& x) {
  std::size_t i = d.interval_of(x);
  if (i == d.interval_count()) return 0;
  return d.values()[i];
}

Rational cdf(const StepDensity& d, const Rational& x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  std::size_t i = d.interval_of(x);
  return d.mass_before(i) + d.values()[i] * (x - d.breakpoints()[i]);
}

Rational partial_first_moment(const StepDensity& d, const Rational& a,
                              const Rational& b) {
  if (a > b) {
    throw std::invalid_argument("partial_first_moment requires a <= b");
  }
  Rational total = 0;
  auto bp = d.breakpoints();
  for (std::size_t i = 0; i < d.interval_count(); ++i) {
    Rational lo = a > bp[i] ? a : bp[i];
    Rational hi = b < bp[i + 1] ? b : bp[i + 1];
    if (lo >= hi) continue;
    total += d.values()[i] * (hi * hi - lo * lo) / 2;
  }
  return total;
}

Rational inverse_cdf(const StepDensity& d, const Rational& u) {
  if (u < 0 || u > 1) {
    throw std::invalid_argument("inverse_cdf requires 0 <= u <= 1");
  }
  if (u == 0) return 0;
  auto bp = d.breakpoints();
  for (std::size_t i = 0; i < d.interval_count(); ++i) {
    const Rational& height = d.values()[i];
    if (height == 0) continue;
    if (d.mass_before(i + 1) >= u) {
      return bp[i] + (u - d.mass_before(i)) / height;
    }
  }
  return 1;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double CounterRng::uniform_at(std::uint64_t seed, std::uint64_t index) {
  constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key = splitmix64(seed + kGolden);
  std::uint64_t bits = splitmix64(key + (index + 1) * kGolden);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

Sampler::Sampler(const StepDensity& d) {
  auto bp = d.breakpoints();
  for (std::size_t i = 0; i < d.interval_count(); ++i) {
    if (d.values()[i] == 0) continue;
    starts_.push_back(to_double(bp[i]));
    ends_.push_back(to_double(bp[i + 1]));
    heights_.push_back(to_double(d.values()[i]));
    cumulative_.push_back(to_double(d.mass_before(i)));
  }
}

double Sampler::inverse_cdf(double u) const {
  // Last interval whose starting mass is <= u.
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  std::size_t i = it == cumulative_.begin()
                      ? 0
                      : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  double x = starts_[i] + (u - cumulative_[i]) / heights_[i];
  x = std::clamp(x, starts_[i], ends_[i]);
  constexpr double kBelowOne = 0x1.fffffffffffffp-1;
  return std::min(x, kBelowOne);
}

double sample(const StepDensity& d, CounterRng& rng) {
  return Sampler(d)(rng);
}

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<Rational> parse_list(std::string_view list) {
  std::vector<Rational> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    auto comma = list.find(',', pos);
    if (comma == std::string_view::npos) comma = list.size();
    out.push_back(parse_rational(list.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

StepDensity parse_density(std::string_view text) {
  std::vector<Rational> breakpoints;
  std::vector<Rational> values;
  bool have_breakpoints = false;
  bool have_values = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("density file: expected 'key = list', got '" +
                                  content + "'");
    }
    std::string key = trim(std::string_view(content).substr(0, eq));
    std::string rest = trim(std::string_view(content).substr(eq + 1));
    if (key == "breakpoints" && !have_breakpoints) {
      breakpoints = parse_list(rest);
      have_breakpoints = true;
    } else if (key == "values" && !have_values) {
      values = parse_list(rest);
      have_values = true;
    } else {
      throw std::invalid_argument("density file: unexpected key '" + key + "'");
    }
  }
  if (!have_breakpoints || !have_values) {
    throw std::invalid_argument(
        "density file needs both 'breakpoints' and 'values' lines");
  }
  return StepDensity(std::move(breakpoints), std::move(values));
}

StepDensity load_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read density file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_density(buffer.str());
}

}  // namespace stepbid
