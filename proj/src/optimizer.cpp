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

#include "stepbid/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "stepbid/closedform.hpp"

namespace stepbid {

std::string_view to_string(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::kEndpoint:
      return "endpoint";
    case CandidateKind::kBreakpoint:
      return "breakpoint";
    case CandidateKind::kStationary:
      return "stationary";
    case CandidateKind::kGrid:
      return "grid";
    case CandidateKind::kPolished:
      return "polished";
  }
  return "unknown";
}

Bid OptimizationResult::bid() const {
  switch (format) {
    case BidFormat::kSimple:
      return SimpleBid(x);
    case BidFormat::kBlock:
      return BlockBid(x);
    case BidFormat::kMultipart:
      break;
  }
  return MultipartBid(x, y);
}

namespace {

bool lexicographically_smaller(const Candidate& a, const Candidate& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

// Evaluates every candidate exactly and picks the maximum; ties go to the
// smaller bid.
template <class Eval>
void select_exact(OptimizationResult& r, std::vector<Candidate> candidates, Eval exact) {
  std::optional<std::size_t> best;
  Rational best_value;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    Rational v = exact(candidates[i]);
    candidates[i].value = to_double(v);
    if (!best || v > best_value ||
        (v == best_value && lexicographically_smaller(candidates[i], candidates[*best]))) {
      best = i;
      best_value = v;
    }
  }
  r.x = candidates[*best].x;
  r.y = candidates[*best].y;
  r.exact_value = best_value;
  r.value = to_double(best_value);
  r.candidates = std::move(candidates);
}

std::optional<Rational> exact_sqrt(const Rational& v) {
  const mpz_class& num = v.get_num();
  const mpz_class& den = v.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0) {
    return std::nullopt;
  }
  Rational root(sqrt(num), sqrt(den));
  root.canonicalize();
  return root;
}

// Real roots of a0 + a1 x + a2 x^2; exact when the discriminant is a
// rational square, otherwise the nearest doubles.
std::vector<Rational> real_roots(const std::vector<Rational>& a) {
  std::vector<Rational> roots;
  const Rational a0 = a.size() > 0 ? a[0] : Rational(0);
  const Rational a1 = a.size() > 1 ? a[1] : Rational(0);
  const Rational a2 = a.size() > 2 ? a[2] : Rational(0);
  if (a2 == 0) {
    if (a1 != 0) roots.push_back(-a0 / a1);
    return roots;
  }
  const Rational disc = a1 * a1 - 4 * a2 * a0;
  if (disc < 0) return roots;
  if (auto s = exact_sqrt(disc)) {
    roots.push_back((-a1 - *s) / (2 * a2));
    roots.push_back((-a1 + *s) / (2 * a2));
    return roots;
  }
  const double d1 = to_double(a1);
  const double q = -0.5 * (d1 + std::copysign(std::sqrt(to_double(disc)), d1));
  roots.push_back(from_double(q / to_double(a2)));
  if (q != 0.0) roots.push_back(from_double(to_double(a0) / q));
  return roots;
}

}  // namespace

OptimizationResult optimize_simple(const CostParams& c) {
  OptimizationResult r;
  r.format = BidFormat::kSimple;
  std::vector<Candidate> cands;
  auto add = [&](Rational b, CandidateKind kind, std::string note) {
    cands.push_back({std::move(b), Rational(0), 0.0, kind, std::move(note)});
  };
  add(0, CandidateKind::kEndpoint, "");
  add(ratio(1, 4), CandidateKind::kBreakpoint, "");
  add(ratio(3, 4), CandidateKind::kBreakpoint, "");
  add(1, CandidateKind::kEndpoint, "");

  const Rational& cs = c.startup;
  const Rational& cv = c.variable;
  auto stationary = [&](const Rational& num, const Rational& den, const Rational& lo,
                        const Rational& hi, const char* note) {
    if (den == 0) return;
    Rational b = num / den;
    if (b >= lo && b <= hi) add(b, CandidateKind::kStationary, note);
  };
  stationary(-2 * cv, cs - 2, 0, ratio(1, 4), "piece [0,1/4)");
  stationary(-cs + 4 * cv, 6 * cs - 4, ratio(1, 4), ratio(3, 4),
             "piece [1/4,3/4), printed sign");
  stationary(cs - 4 * cv, 6 * cs - 4, ratio(1, 4), ratio(3, 4), "piece [1/4,3/4)");
  stationary(-cs - 2 * cv, cs - 2, ratio(3, 4), 1, "piece [3/4,1]");

  select_exact(r, std::move(cands),
               [&](const Candidate& k) { return expected_simple(k.x, c); });
  return r;
}

OptimizationResult optimize_block(const CostParams& c) {
  OptimizationResult r;
  r.format = BidFormat::kBlock;
  std::vector<Candidate> cands;
  const PiecewisePolynomial& form = block_form();
  const auto& bp = form.breakpoints();
  for (std::size_t i = 0; i < bp.size(); ++i) {
    const bool end = i == 0 || i + 1 == bp.size();
    cands.push_back({bp[i], Rational(0), 0.0,
                     end ? CandidateKind::kEndpoint : CandidateKind::kBreakpoint, ""});
  }
  const Rational k = c.full();
  if (k >= 0 && k <= 2) cands.push_back({k, Rational(0), 0.0, CandidateKind::kStationary, "c_s + 2 c_v"});

  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const auto coeffs = form.derivative_piece(i).bind(c);
    if (std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& v) { return v == 0; })) {
      continue;
    }
    for (const auto& root : real_roots(coeffs)) {
      if (root >= bp[i] && root <= bp[i + 1]) {
        cands.push_back({root, Rational(0), 0.0, CandidateKind::kStationary,
                         "root of piece " + std::to_string(i)});
      }
    }
  }

  select_exact(r, std::move(cands),
               [&](const Candidate& k2) { return expected_block(k2.x, c); });
  return r;
}

namespace {

struct Pt {
  double bs;
  double bv;
};

bool feasible(const Pt& p) {
  return p.bs >= 0.0 && p.bv >= 0.0 && p.bv <= 1.0 && p.bs + 2.0 * p.bv <= 2.0;
}

bool exactly_feasible(const Rational& bs, const Rational& bv) {
  return bs >= 0 && bv >= 0 && bv <= 1 && bs + 2 * bv <= 2;
}

bool in_closure(const MultipartRegion& r, const Pt& p, double tol) {
  const double lo = to_double(r.bv_lo);
  const double hi = to_double(r.bv_hi);
  if (p.bv < lo - tol || p.bv > hi + tol) return false;
  return p.bs >= r.bs_lo.at(p.bv) - tol && p.bs <= r.bs_hi.at(p.bv) + tol;
}

// Stable real roots of a + b t + c t^2.
std::vector<double> quadratic_roots(double a, double b, double c) {
  std::vector<double> out;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) return out;
  if (std::abs(c) <= 1e-14 * scale) {
    if (std::abs(b) > 1e-14 * scale) out.push_back(-a / b);
    return out;
  }
  const double disc = b * b - 4.0 * c * a;
  if (disc < 0.0) return out;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  out.push_back(q / c);
  if (q != 0.0) out.push_back(a / q);
  return out;
}

class MultipartSearch {
 public:
  explicit MultipartSearch(const CostParams& c)
      : surface_(BasicCost<double>(to_double(c.startup), to_double(c.variable))) {}

  std::vector<Candidate> run() {
    add({0.0, 0.0}, CandidateKind::kEndpoint, "");
    add({2.0, 0.0}, CandidateKind::kEndpoint, "");
    add({0.0, 1.0}, CandidateKind::kEndpoint, "");
    const auto& regions = multipart_regions();
    for (std::size_t i = 0; i < regions.size(); ++i) search_region(static_cast<int>(i));
    grid();
    polish();
    return std::move(candidates_);
  }

 private:
  void add(const Pt& p, CandidateKind kind, std::string note) {
    candidates_.push_back(
        {from_double(p.bs), from_double(p.bv), surface_(p.bs, p.bv), kind, std::move(note)});
  }

  static std::vector<Pt> vertices(const MultipartRegion& r) {
    std::vector<Pt> out;
    for (const auto& [bs, bv] : r.corners()) out.push_back({to_double(bs), to_double(bv)});
    return out;
  }

  void search_region(int index) {
    const MultipartRegion& region = multipart_regions()[index];
    const BoundCubic2& poly = surface_.piece(index);
    const std::vector<Pt> corners = vertices(region);
    for (const auto& v : corners) add(v, CandidateKind::kBreakpoint, region.label + " vertex");

    // Edge restrictions: g'(t) = grad(P + t d) . d is quadratic in t.
    for (std::size_t e = 0; e < corners.size(); ++e) {
      const Pt& p = corners[e];
      const Pt& q = corners[(e + 1) % corners.size()];
      const Pt d{q.bs - p.bs, q.bv - p.bv};
      auto slope = [&](double t) {
        auto g = poly.gradient(p.bs + t * d.bs, p.bv + t * d.bv);
        return g[0] * d.bs + g[1] * d.bv;
      };
      const double s0 = slope(0.0);
      const double sh = slope(0.5);
      const double s1 = slope(1.0);
      for (double t : quadratic_roots(s0, -3.0 * s0 + 4.0 * sh - s1, 2.0 * s0 - 4.0 * sh + 2.0 * s1)) {
        if (t > 0.0 && t < 1.0) {
          Pt x{p.bs + t * d.bs, p.bv + t * d.bv};
          if (feasible(x)) add(x, CandidateKind::kStationary, region.label + " edge");
        }
      }
    }

    // Interior stationary points: Newton on the gradient from a 3x3 seed set.
    const double lo = to_double(region.bv_lo);
    const double hi = to_double(region.bv_hi);
    for (int a = 1; a <= 3; ++a) {
      for (int b = 1; b <= 3; ++b) {
        const double bv = lo + (hi - lo) * a / 4.0;
        const double bs_lo = region.bs_lo.at(bv);
        const double bs = bs_lo + (region.bs_hi.at(bv) - bs_lo) * b / 4.0;
        if (auto s = newton(poly, {bs, bv}); s && in_closure(region, *s, 1e-12) && feasible(*s)) {
          add(*s, CandidateKind::kStationary, region.label + " interior");
        }
      }
    }
  }

  static std::optional<Pt> newton(const BoundCubic2& poly, Pt p) {
    for (int it = 0; it < 60; ++it) {
      const auto g = poly.gradient(p.bs, p.bv);
      const auto h = poly.hessian(p.bs, p.bv);
      const double det = h[0] * h[2] - h[1] * h[1];
      if (std::abs(det) < 1e-300) return std::nullopt;
      const double ds = -(h[2] * g[0] - h[1] * g[1]) / det;
      const double dv = -(h[0] * g[1] - h[1] * g[0]) / det;
      p.bs += ds;
      p.bv += dv;
      if (!std::isfinite(p.bs) || !std::isfinite(p.bv) || std::abs(p.bs) > 10.0 ||
          std::abs(p.bv) > 10.0) {
        return std::nullopt;
      }
      if (std::abs(ds) + std::abs(dv) < 1e-15) break;
    }
    const auto g = poly.gradient(p.bs, p.bv);
    if (std::abs(g[0]) + std::abs(g[1]) > 1e-9) return std::nullopt;
    return p;
  }

  void grid() {
    constexpr int kSteps = 64;
    const std::size_t regions = multipart_regions().size();
    std::vector<std::optional<std::pair<Pt, double>>> best(regions);
    for (int j = 0; j < kSteps; ++j) {
      const double bv = static_cast<double>(j) / kSteps;
      for (int i = 0; i + 2 * j <= 2 * kSteps; ++i) {
        const Pt p{static_cast<double>(i) / kSteps, bv};
        const int region = surface_.region_at(p.bs, p.bv);
        if (region < 0) continue;
        const double v = surface_.piece(region).value(p.bs, p.bv);
        if (!best[region] || v > best[region]->second) best[region] = {p, v};
      }
    }
    for (std::size_t r = 0; r < regions; ++r) {
      if (best[r]) add(best[r]->first, CandidateKind::kGrid, multipart_regions()[r].label);
    }
  }

  // Compass search from the best few distinct candidates.
  void polish() {
    constexpr int kStarts = 5;
    std::vector<Pt> starts;
    std::vector<std::size_t> order(candidates_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return candidates_[a].value > candidates_[b].value;
    });
    for (std::size_t i : order) {
      const Pt p{to_double(candidates_[i].x), to_double(candidates_[i].y)};
      const bool seen = std::any_of(starts.begin(), starts.end(), [&](const Pt& s) {
        return std::abs(s.bs - p.bs) + std::abs(s.bv - p.bv) < 1e-9;
      });
      if (!seen) starts.push_back(p);
      if (static_cast<int>(starts.size()) == kStarts) break;
    }
    constexpr std::array<std::array<double, 2>, 8> kDirs = {
        {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
    for (Pt p : starts) {
      double value = surface_(p.bs, p.bv);
      double step = 1.0 / 128.0;
      int moves = 0;
      while (step >= 1e-12 && moves < 100000) {
        bool improved = false;
        for (const auto& d : kDirs) {
          const Pt q{p.bs + step * d[0], p.bv + step * d[1]};
          if (!feasible(q)) continue;
          const double v = surface_(q.bs, q.bv);
          if (v > value) {
            p = q;
            value = v;
            improved = true;
            ++moves;
            break;
          }
        }
        if (!improved) step /= 2.0;
      }
      add(p, CandidateKind::kPolished, "");
    }
  }

  MultipartSurface surface_;
  std::vector<Candidate> candidates_;
};

}  // namespace

OptimizationResult optimize_multipart(const CostParams& c) {
  OptimizationResult r;
  r.format = BidFormat::kMultipart;
  std::vector<Candidate> cands = MultipartSearch(c).run();

  // Exact points the search can only approach on flat ridges: the bid that
  // reveals the true costs (pointwise optimal, so a global maximiser), and the
  // simple and block optima on the edges bs = 0 and bv = 0.
  const auto cd = BasicCost<double>(to_double(c.startup), to_double(c.variable));
  auto add = [&](const Rational& bs, const Rational& bv, CandidateKind kind, std::string note) {
    if (!exactly_feasible(bs, bv)) return;
    cands.push_back({bs, bv, expected_multipart(to_double(bs), to_double(bv), cd), kind,
                     std::move(note)});
  };
  add(c.startup, c.variable, CandidateKind::kStationary, "cost-revealing bid");
  const OptimizationResult simple = optimize_simple(c);
  add(Rational(0), simple.x, CandidateKind::kBreakpoint, "simple optimum on bs = 0");
  const OptimizationResult block = optimize_block(c);
  add(block.x, Rational(0), CandidateKind::kBreakpoint, "block optimum on bv = 0");

  std::erase_if(cands, [](const Candidate& k) { return !exactly_feasible(k.x, k.y); });
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& k : cands) top = std::max(top, k.value);

  // Exact re-ranking of the near-best candidates.
  std::optional<std::size_t> best;
  Rational best_value;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (cands[i].value < top - 1e-9) continue;
    Rational v = expected_multipart(cands[i].x, cands[i].y, c);
    cands[i].value = to_double(v);
    if (!best || v > best_value ||
        (v == best_value && lexicographically_smaller(cands[i], cands[*best]))) {
      best = i;
      best_value = v;
    }
  }
  r.x = cands[*best].x;
  r.y = cands[*best].y;
  r.exact_value = best_value;
  r.value = to_double(best_value);
  r.candidates = std::move(cands);
  return r;
}

namespace {

double ratio_of(const Rational& e, const Rational& m) {
  if (m == 0) {
    if (e == 0) return 1.0;
    return e > 0 ? std::numeric_limits<double>::infinity()
                 : -std::numeric_limits<double>::infinity();
  }
  return to_double(e / m);
}

}  // namespace

FormatComparison best_format(const CostParams& c) {
  FormatComparison out;
  out.simple = optimize_simple(c);
  out.block = optimize_block(c);
  out.multipart = optimize_multipart(c);
  out.ratio_simple = ratio_of(out.simple.exact_value, out.multipart.exact_value);
  out.ratio_block = ratio_of(out.block.exact_value, out.multipart.exact_value);
  const double s = out.simple.value;
  const double b = out.block.value;
  const double m = out.multipart.value;
  if (m >= std::max(s, b) - kTieTolerance) {
    out.best = BidFormat::kMultipart;
  } else if (b >= s - kTieTolerance) {
    out.best = BidFormat::kBlock;
  } else {
    out.best = BidFormat::kSimple;
  }
  return out;
}

}  // namespace stepbid
