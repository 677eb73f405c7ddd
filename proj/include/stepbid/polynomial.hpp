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

// Polynomials in the bid variable(s) whose coefficients are affine in the cost
// parameters (a + b c_s + c c_v). Keeping the cost dependence symbolic lets
// continuity and identity checks run as exact coefficient algebra.

#ifndef STEPBID_POLYNOMIAL_HPP_
#define STEPBID_POLYNOMIAL_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "stepbid/payoff.hpp"
#include "stepbid/rational.hpp"

namespace stepbid {

template <class T>
T from_rational(const Rational& r) {
  if constexpr (std::is_same_v<T, Rational>) {
    return r;
  } else {
    return static_cast<T>(to_double(r));
  }
}

struct AffineCoef {
  Rational constant;
  Rational startup;   // coefficient of c_s
  Rational variable;  // coefficient of c_v

  template <class T>
  T at(const BasicCost<T>& c) const {
    return T(from_rational<T>(constant) + from_rational<T>(startup) * c.startup +
             from_rational<T>(variable) * c.variable);
  }

  bool is_zero() const { return constant == 0 && startup == 0 && variable == 0; }

  AffineCoef& operator+=(const AffineCoef& o);
  AffineCoef& operator-=(const AffineCoef& o);
  AffineCoef& operator*=(const Rational& k);
  friend AffineCoef operator+(AffineCoef a, const AffineCoef& b) { return a += b; }
  friend AffineCoef operator-(AffineCoef a, const AffineCoef& b) { return a -= b; }
  friend AffineCoef operator*(AffineCoef a, const Rational& k) { return a *= k; }
  bool operator==(const AffineCoef&) const = default;
};

std::string to_string(const AffineCoef& coef);

// Univariate polynomial, coefficients from degree 0 upward.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<AffineCoef> coefficients);

  const std::vector<AffineCoef>& coefficients() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  Polynomial derivative() const;

  // Coefficients with the costs substituted, lowest degree first.
  template <class T>
  std::vector<T> bind(const BasicCost<T>& c) const {
    std::vector<T> out;
    out.reserve(coeffs_.size());
    for (const auto& a : coeffs_) out.push_back(a.at(c));
    return out;
  }

  // Value with symbolic costs: an affine expression in (c_s, c_v).
  AffineCoef at(const Rational& x) const;

  template <class T>
  T operator()(const T& x, const BasicCost<T>& c) const {
    T acc = T(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc = T(acc * x + it->at(c));
    }
    return acc;
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  bool operator==(const Polynomial& o) const;

 private:
  void trim();
  std::vector<AffineCoef> coeffs_;
};

std::string to_string(const Polynomial& p, std::string_view variable = "b");

// Which neighbouring piece governs a value exactly at a breakpoint.
enum class Side { kLeft, kRight };

/**
 * Piecewise polynomial on [breakpoints.front(), breakpoints.back()].
 *
 * Pieces are half-open [a, b) except the last, which is closed. Side::kLeft
 * selects the piece ending at a breakpoint instead.
 */
class PiecewisePolynomial {
 public:
  PiecewisePolynomial(std::vector<Rational> breakpoints,
                      std::vector<Polynomial> pieces);

  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<Polynomial>& pieces() const { return pieces_; }
  const Rational& lower() const { return breakpoints_.front(); }
  const Rational& upper() const { return breakpoints_.back(); }

  // Throws std::domain_error if x is outside [lower, upper].
  template <class T>
  std::size_t piece_index(const T& x, Side side = Side::kRight) const;

  template <class T>
  T value(const T& x, const BasicCost<T>& c, Side side = Side::kRight) const {
    return pieces_[piece_index(x, side)](x, c);
  }

  template <class T>
  T derivative(const T& x, const BasicCost<T>& c, Side side = Side::kRight) const {
    return derivatives_[piece_index(x, side)](x, c);
  }

  const Polynomial& derivative_piece(std::size_t i) const { return derivatives_[i]; }

  // Difference of the two pieces meeting at interior breakpoint i (1-based
  // into breakpoints()), as an affine expression in the costs. Zero for every
  // cost pair means the function is continuous there.
  AffineCoef jump_at(std::size_t breakpoint) const;

 private:
  template <class T>
  T breakpoint_as(std::size_t i) const {
    if constexpr (std::is_same_v<T, double>) {
      return breakpoints_d_[i];
    } else {
      return from_rational<T>(breakpoints_[i]);
    }
  }

  std::vector<Rational> breakpoints_;
  std::vector<double> breakpoints_d_;
  std::vector<Polynomial> pieces_;
  std::vector<Polynomial> derivatives_;
};

template <class T>
std::size_t PiecewisePolynomial::piece_index(const T& x, Side side) const {
  const std::size_t n = pieces_.size();
  const T lo = breakpoint_as<T>(0);
  const T hi = breakpoint_as<T>(n);
  if (x < lo || x > hi) {
    throw std::domain_error("argument outside the piecewise domain");
  }
  if (side == Side::kRight) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (x < breakpoint_as<T>(i + 1)) return i;
    }
    return n - 1;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (x <= breakpoint_as<T>(i + 1)) return i;
  }
  return n - 1;
}

// A piecewise polynomial with the costs substituted, in doubles.
struct BoundPiecewise {
  std::vector<double> breakpoints;
  std::vector<std::vector<double>> pieces;  // lowest degree first

  static BoundPiecewise bind(const PiecewisePolynomial& p, const BasicCost<double>& cost);

  std::size_t piece_index(double x) const;
  double value(double x) const;
  double piece_value(std::size_t piece, double x) const;
};

// Dense polynomial in (bs, bv) with per-variable degree <= 3.
class BivariatePolynomial {
 public:
  static constexpr int kMaxDegree = 3;

  // coefficient(i, j) multiplies bs^i bv^j.
  const AffineCoef& coefficient(int i, int j) const { return coeffs_[i][j]; }
  AffineCoef& coefficient(int i, int j) { return coeffs_[i][j]; }

  template <class T>
  T operator()(const T& bs, const T& bv, const BasicCost<T>& c) const {
    T acc = T(0);
    for (int i = kMaxDegree; i >= 0; --i) {
      T row = T(0);
      for (int j = kMaxDegree; j >= 0; --j) row = T(row * bv + coeffs_[i][j].at(c));
      acc = T(acc * bs + row);
    }
    return acc;
  }

  // Value with symbolic costs.
  AffineCoef at(const Rational& bs, const Rational& bv) const;

  bool operator==(const BivariatePolynomial&) const = default;

 private:
  std::array<std::array<AffineCoef, kMaxDegree + 1>, kMaxDegree + 1> coeffs_{};
};

std::string to_string(const BivariatePolynomial& p);

// Cost-bound bivariate cubic in doubles with first and second derivatives,
// used by the optimizers.
struct BoundCubic2 {
  std::array<std::array<double, 4>, 4> c{};  // c[i][j] multiplies bs^i bv^j

  static BoundCubic2 bind(const BivariatePolynomial& p, const BasicCost<double>& cost);

  double value(double bs, double bv) const;
  std::array<double, 2> gradient(double bs, double bv) const;
  std::array<double, 3> hessian(double bs, double bv) const;  // (ss, sv, vv)
};

// Parsers for the plain term syntax used to transcribe closed forms:
//   "-1/12 b^3 + 1/8 b^2 cs + 1/4 b^2 cv - cs - 2 cv + 1"
// Terms are separated by '+' or '-'; each term is an optional rational
// coefficient followed by space-separated factors (b, bs, bv with optional
// ^k, and at most one of cs / cv). Throws std::invalid_argument.
Polynomial parse_polynomial(std::string_view text);
BivariatePolynomial parse_bivariate(std::string_view text);

}  // namespace stepbid

#endif  // STEPBID_POLYNOMIAL_HPP_
