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

#include "stepbid/polynomial.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace stepbid {

AffineCoef& AffineCoef::operator+=(const AffineCoef& o) {
  constant += o.constant;
  startup += o.startup;
  variable += o.variable;
  return *this;
}

AffineCoef& AffineCoef::operator-=(const AffineCoef& o) {
  constant -= o.constant;
  startup -= o.startup;
  variable -= o.variable;
  return *this;
}

AffineCoef& AffineCoef::operator*=(const Rational& k) {
  constant *= k;
  startup *= k;
  variable *= k;
  return *this;
}

std::string to_string(const AffineCoef& coef) {
  std::ostringstream out;
  out << "(" << coef.constant.get_str();
  if (coef.startup != 0) {
    out << (coef.startup > 0 ? " + " : " - ") << Rational(abs(coef.startup)).get_str() << " cs";
  }
  if (coef.variable != 0) {
    out << (coef.variable > 0 ? " + " : " - ") << Rational(abs(coef.variable)).get_str()
        << " cv";
  }
  out << ")";
  return out.str();
}

Polynomial::Polynomial(std::vector<AffineCoef> coefficients)
    : coeffs_(std::move(coefficients)) {
  trim();
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Polynomial Polynomial::derivative() const {
  std::vector<AffineCoef> out;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    out.push_back(coeffs_[k] * Rational(static_cast<long>(k)));
  }
  return Polynomial(std::move(out));
}

AffineCoef Polynomial::at(const Rational& x) const {
  AffineCoef acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<AffineCoef> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out[k] -= b.coeffs_[k];
  return Polynomial(std::move(out));
}

bool Polynomial::operator==(const Polynomial& o) const {
  return coeffs_ == o.coeffs_;
}

std::string to_string(const Polynomial& p, std::string_view variable) {
  std::ostringstream out;
  bool first = true;
  for (int k = p.degree(); k >= 0; --k) {
    const AffineCoef& a = p.coefficients()[k];
    if (a.is_zero()) continue;
    if (!first) out << " + ";
    first = false;
    out << to_string(a);
    if (k >= 1) out << " " << variable;
    if (k >= 2) out << "^" << k;
  }
  if (first) out << "0";
  return out.str();
}

PiecewisePolynomial::PiecewisePolynomial(std::vector<Rational> breakpoints,
                                         std::vector<Polynomial> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (breakpoints_.size() != pieces_.size() + 1 || pieces_.empty()) {
    throw std::invalid_argument(
        "piecewise polynomial needs one more breakpoint than pieces");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] < breakpoints_[i + 1])) {
      throw std::invalid_argument("breakpoints must be strictly increasing");
    }
  }
  for (const auto& b : breakpoints_) breakpoints_d_.push_back(to_double(b));
  for (const auto& p : pieces_) derivatives_.push_back(p.derivative());
}

AffineCoef PiecewisePolynomial::jump_at(std::size_t breakpoint) const {
  if (breakpoint == 0 || breakpoint + 1 >= breakpoints_.size()) {
    throw std::out_of_range("jump_at needs an interior breakpoint");
  }
  const Rational& x = breakpoints_[breakpoint];
  return pieces_[breakpoint].at(x) - pieces_[breakpoint - 1].at(x);
}

BoundPiecewise BoundPiecewise::bind(const PiecewisePolynomial& p,
                                    const BasicCost<double>& cost) {
  BoundPiecewise out;
  for (const auto& b : p.breakpoints()) out.breakpoints.push_back(to_double(b));
  for (const auto& piece : p.pieces()) out.pieces.push_back(piece.bind(cost));
  return out;
}

std::size_t BoundPiecewise::piece_index(double x) const {
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    if (x < breakpoints[i + 1]) return i;
  }
  return pieces.size() - 1;
}

double BoundPiecewise::piece_value(std::size_t piece, double x) const {
  const auto& c = pieces[piece];
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double BoundPiecewise::value(double x) const {
  return piece_value(piece_index(x), x);
}

AffineCoef BivariatePolynomial::at(const Rational& bs, const Rational& bv) const {
  AffineCoef acc;
  for (int i = kMaxDegree; i >= 0; --i) {
    AffineCoef row;
    for (int j = kMaxDegree; j >= 0; --j) {
      row *= bv;
      row += coeffs_[i][j];
    }
    acc *= bs;
    acc += row;
  }
  return acc;
}

std::string to_string(const BivariatePolynomial& p) {
  std::ostringstream out;
  bool first = true;
  for (int i = BivariatePolynomial::kMaxDegree; i >= 0; --i) {
    for (int j = BivariatePolynomial::kMaxDegree; j >= 0; --j) {
      const AffineCoef& a = p.coefficient(i, j);
      if (a.is_zero()) continue;
      if (!first) out << " + ";
      first = false;
      out << to_string(a);
      if (i >= 1) out << " bs" << (i >= 2 ? "^" + std::to_string(i) : "");
      if (j >= 1) out << " bv" << (j >= 2 ? "^" + std::to_string(j) : "");
    }
  }
  if (first) out << "0";
  return out.str();
}

BoundCubic2 BoundCubic2::bind(const BivariatePolynomial& p,
                              const BasicCost<double>& cost) {
  BoundCubic2 out;
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; j <= 3; ++j) out.c[i][j] = p.coefficient(i, j).at(cost);
  }
  return out;
}

double BoundCubic2::value(double bs, double bv) const {
  double acc = 0.0;
  for (int i = 3; i >= 0; --i) {
    double row = 0.0;
    for (int j = 3; j >= 0; --j) row = row * bv + c[i][j];
    acc = acc * bs + row;
  }
  return acc;
}

std::array<double, 2> BoundCubic2::gradient(double bs, double bv) const {
  double ds = 0.0;
  double dv = 0.0;
  double ps[4] = {1.0, bs, bs * bs, bs * bs * bs};
  double pv[4] = {1.0, bv, bv * bv, bv * bv * bv};
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; j <= 3; ++j) {
      if (i >= 1) ds += i * c[i][j] * ps[i - 1] * pv[j];
      if (j >= 1) dv += j * c[i][j] * ps[i] * pv[j - 1];
    }
  }
  return {ds, dv};
}

std::array<double, 3> BoundCubic2::hessian(double bs, double bv) const {
  double ss = 0.0;
  double sv = 0.0;
  double vv = 0.0;
  double ps[4] = {1.0, bs, bs * bs, bs * bs * bs};
  double pv[4] = {1.0, bv, bv * bv, bv * bv * bv};
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; j <= 3; ++j) {
      if (i >= 2) ss += i * (i - 1) * c[i][j] * ps[i - 2] * pv[j];
      if (i >= 1 && j >= 1) sv += i * j * c[i][j] * ps[i - 1] * pv[j - 1];
      if (j >= 2) vv += j * (j - 1) * c[i][j] * ps[i] * pv[j - 2];
    }
  }
  return {ss, sv, vv};
}

namespace {

struct Term {
  Rational coefficient{1};
  std::map<std::string, int> powers;
};

[[noreturn]] void parse_error(std::string_view text, const std::string& why) {
  throw std::invalid_argument("cannot parse polynomial '" + std::string(text) +
                              "': " + why);
}

std::vector<Term> parse_terms(std::string_view text) {
  std::vector<Term> terms;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_space();
  if (pos == text.size()) parse_error(text, "empty");
  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') {
    negative = text[pos] == '-';
    ++pos;
  }
  while (true) {
    Term term;
    bool any = false;
    while (true) {
      skip_space();
      if (pos == text.size() || text[pos] == '+' || text[pos] == '-') break;
      std::size_t start = pos;
      if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/'))
          ++pos;
        term.coefficient *= parse_rational(text.substr(start, pos - start));
      } else if (std::isalpha(static_cast<unsigned char>(text[pos]))) {
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
        std::string name(text.substr(start, pos - start));
        int power = 1;
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          std::size_t digits = pos;
          while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
          if (digits == pos) parse_error(text, "missing exponent");
          power = std::stoi(std::string(text.substr(digits, pos - digits)));
        }
        term.powers[name] += power;
      } else if (text[pos] == '*') {
        ++pos;
        continue;
      } else {
        parse_error(text, std::string("unexpected character '") + text[pos] + "'");
      }
      any = true;
    }
    if (!any) parse_error(text, "empty term");
    if (negative) term.coefficient = -term.coefficient;
    terms.push_back(std::move(term));
    if (pos == text.size()) break;
    negative = text[pos] == '-';
    ++pos;
  }
  return terms;
}

// Splits off the cost factor of a term into the matching AffineCoef slot.
AffineCoef cost_part(std::string_view text, Term& term) {
  AffineCoef out;
  int cs = term.powers.count("cs") ? term.powers["cs"] : 0;
  int cv = term.powers.count("cv") ? term.powers["cv"] : 0;
  term.powers.erase("cs");
  term.powers.erase("cv");
  if (cs + cv > 1) parse_error(text, "coefficients must be affine in the costs");
  if (cs == 1) {
    out.startup = term.coefficient;
  } else if (cv == 1) {
    out.variable = term.coefficient;
  } else {
    out.constant = term.coefficient;
  }
  return out;
}

}  // namespace

Polynomial parse_polynomial(std::string_view text) {
  std::vector<AffineCoef> coeffs;
  for (Term& term : parse_terms(text)) {
    AffineCoef part = cost_part(text, term);
    int k = 0;
    for (const auto& [name, power] : term.powers) {
      if (name != "b") parse_error(text, "unknown variable '" + name + "'");
      k = power;
    }
    if (static_cast<std::size_t>(k) >= coeffs.size()) coeffs.resize(k + 1);
    coeffs[k] += part;
  }
  return Polynomial(std::move(coeffs));
}

BivariatePolynomial parse_bivariate(std::string_view text) {
  BivariatePolynomial out;
  for (Term& term : parse_terms(text)) {
    AffineCoef part = cost_part(text, term);
    int i = 0;
    int j = 0;
    for (const auto& [name, power] : term.powers) {
      if (name == "bs") {
        i = power;
      } else if (name == "bv") {
        j = power;
      } else {
        parse_error(text, "unknown variable '" + name + "'");
      }
    }
    if (i > BivariatePolynomial::kMaxDegree || j > BivariatePolynomial::kMaxDegree) {
      parse_error(text, "degree too high");
    }
    out.coefficient(i, j) += part;
  }
  return out;
}

}  // namespace stepbid
