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

#include "stepbid/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace stepbid {

Polygon rectangle(const Rational& x0, const Rational& x1, const Rational& y0,
                  const Rational& y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

Polygon clip(const Polygon& polygon, const HalfPlane& h) {
  Polygon out;
  const std::size_t n = polygon.size();
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = polygon[i];
    const Point& q = polygon[(i + 1) % n];
    Rational fp = h.x_coef * p.x + h.y_coef * p.y - h.bound;
    Rational fq = h.x_coef * q.x + h.y_coef * q.y - h.bound;
    if (fp >= 0) out.push_back(p);
    if ((fp > 0 && fq < 0) || (fp < 0 && fq > 0)) {
      Rational t = fp / (fp - fq);
      out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  // Vertices touching the line can repeat; drop consecutive duplicates.
  Polygon dedup;
  for (const auto& p : out) {
    if (dedup.empty() || !(dedup.back() == p)) dedup.push_back(p);
  }
  while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
  return dedup;
}

Rational area(const Polygon& polygon) {
  Rational twice = 0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = polygon[i];
    const Point& q = polygon[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return twice / 2;
}

Rational integrate(const Polygon& polygon, const AffineIntegrand& f) {
  Rational total = 0;
  if (polygon.size() < 3) return total;
  const Point& a = polygon[0];
  for (std::size_t i = 1; i + 1 < polygon.size(); ++i) {
    const Point& b = polygon[i];
    const Point& c = polygon[i + 1];
    Rational tri = ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)) / 2;
    if (tri == 0) continue;
    Rational cx = (a.x + b.x + c.x) / 3;
    Rational cy = (a.y + b.y + c.y) / 3;
    total += tri * (f.constant + f.x_coef * cx + f.y_coef * cy);
  }
  return total;
}

namespace {

AcceptanceRegionSet simple_regions(const SimpleBid& bid, const CostParams& c) {
  const Rational one_period = -(c.startup + c.variable);
  const Rational two_periods = -c.full();
  const HalfPlane accept1{1, 0, bid.price1};
  const HalfPlane reject1{-1, 0, -bid.price1};
  const HalfPlane accept2{0, 1, bid.price2};
  const HalfPlane reject2{0, -1, -bid.price2};
  return {
      {{accept1, accept2}, {two_periods, 1, 1}},
      {{accept1, reject2}, {one_period, 1, 0}},
      {{reject1, accept2}, {one_period, 0, 1}},
  };
}

AcceptanceRegionSet block_regions(const BlockBid& bid, const CostParams& c) {
  return {{{HalfPlane{1, 1, bid.threshold}}, {-c.full(), 1, 1}}};
}

AcceptanceRegionSet multipart_regions(const MultipartBid& bid, const CostParams& c) {
  const Rational& bs = bid.startup;
  const Rational& bv = bid.variable;
  const Rational one_period = -(c.startup + c.variable);
  return {
      {{HalfPlane{1, 0, bs + bv}, HalfPlane{0, -1, -bv}}, {one_period, 1, 0}},
      {{HalfPlane{-1, 0, -bv}, HalfPlane{0, 1, bs + bv}}, {one_period, 0, 1}},
      {{HalfPlane{1, 0, bv}, HalfPlane{0, 1, bv}, HalfPlane{1, 1, bs + 2 * bv}},
       {-c.full(), 1, 1}},
  };
}

}  // namespace

AcceptanceRegionSet regions_for(const Bid& bid, const CostParams& cost) {
  return std::visit(
      [&](const auto& b) -> AcceptanceRegionSet {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, SimpleBid>) {
          return simple_regions(b, cost);
        } else if constexpr (std::is_same_v<B, BlockBid>) {
          return block_regions(b, cost);
        } else {
          return multipart_regions(b, cost);
        }
      },
      bid);
}

Rational exact_expected(const AcceptanceRegionSet& regions, const StepDensity& d) {
  Rational total = 0;
  auto bp = d.breakpoints();
  auto rho = d.values();
  const std::size_t cells = d.interval_count();
  for (const auto& region : regions) {
    for (std::size_t i = 0; i < cells; ++i) {
      if (rho[i] == 0) continue;
      for (std::size_t j = 0; j < cells; ++j) {
        if (rho[j] == 0) continue;
        Polygon piece = rectangle(bp[i], bp[i + 1], bp[j], bp[j + 1]);
        for (const auto& h : region.bounds) {
          piece = clip(piece, h);
          if (piece.size() < 3) break;
        }
        if (piece.size() < 3 || area(piece) == 0) continue;
        total += rho[i] * rho[j] * integrate(piece, region.integrand);
      }
    }
  }
  return total;
}

Rational exact_expected(const Bid& bid, const CostParams& cost, const StepDensity& d) {
  return exact_expected(regions_for(bid, cost), d);
}

namespace {

constexpr std::uint64_t kChunk = 1 << 16;

struct ChunkStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

// Chan et al. pairwise merge of running moments.
void merge(ChunkStats& into, const ChunkStats& other) {
  if (other.count == 0) return;
  if (into.count == 0) {
    into = other;
    return;
  }
  const double n_a = static_cast<double>(into.count);
  const double n_b = static_cast<double>(other.count);
  const double delta = other.mean - into.mean;
  const double n = n_a + n_b;
  into.mean += delta * n_b / n;
  into.m2 += other.m2 + delta * delta * n_a * n_b / n;
  into.count += other.count;
}

using Kernel = std::function<double(double, double)>;

Kernel make_kernel(const Bid& bid, const CostParams& cost) {
  const double cs = to_double(cost.startup);
  const double cv = to_double(cost.variable);
  const BasicCost<double> c(cs, cv);
  return std::visit(
      [&](const auto& b) -> Kernel {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, SimpleBid>) {
          BasicSimpleBid<double> db(to_double(b.price1), to_double(b.price2));
          return [db, c](double p1, double p2) {
            return simple_profit(db, BasicScenario<double>(p1, p2), c);
          };
        } else if constexpr (std::is_same_v<B, BlockBid>) {
          BasicBlockBid<double> db(to_double(b.threshold));
          return [db, c](double p1, double p2) {
            return block_profit(db, BasicScenario<double>(p1, p2), c);
          };
        } else {
          double bv = to_double(b.variable);
          // Rounding must not push the pair outside the feasible set.
          double bs = std::min(to_double(b.startup), 2.0 - 2.0 * bv);
          BasicMultipartBid<double> db(std::max(bs, 0.0), bv);
          return [db, c](double p1, double p2) {
            return multipart_profit(db, BasicScenario<double>(p1, p2), c);
          };
        }
      },
      bid);
}

}  // namespace

McEstimate mc_expected(const Bid& bid, const CostParams& cost, const StepDensity& d,
                       std::uint64_t n, std::uint64_t seed, unsigned workers) {
  if (n == 0) throw std::invalid_argument("mc_expected needs n >= 1");
  const Kernel kernel = make_kernel(bid, cost);
  const Sampler sampler(d);
  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<ChunkStats> stats(chunks);

  auto run_chunk = [&](std::uint64_t k) {
    ChunkStats s;
    const std::uint64_t end = std::min(n, (k + 1) * kChunk);
    for (std::uint64_t i = k * kChunk; i < end; ++i) {
      const double p1 = sampler.inverse_cdf(CounterRng::uniform_at(seed, 2 * i));
      const double p2 = sampler.inverse_cdf(CounterRng::uniform_at(seed, 2 * i + 1));
      const double x = kernel(p1, p2);
      ++s.count;
      const double delta = x - s.mean;
      s.mean += delta / static_cast<double>(s.count);
      s.m2 += delta * (x - s.mean);
    }
    stats[k] = s;
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
  if (workers <= 1) {
    for (std::uint64_t k = 0; k < chunks; ++k) run_chunk(k);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t k = next++; k < chunks; k = next++) run_chunk(k);
      });
    }
  }

  ChunkStats total;
  for (const auto& s : stats) merge(total, s);
  McEstimate out;
  out.samples = total.count;
  out.estimate = total.mean;
  if (total.count > 1) {
    const double variance = total.m2 / static_cast<double>(total.count - 1);
    out.standard_error = std::sqrt(variance / static_cast<double>(total.count));
  }
  return out;
}

}  // namespace stepbid
