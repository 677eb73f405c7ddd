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

#include "stepbid/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "stepbid/closedform.hpp"

namespace stepbid {

std::vector<Rational> RangeSpec::values() const {
  std::vector<Rational> out;
  for (Rational v = lo; v <= hi; v += step) out.push_back(v);
  return out;
}

RangeSpec parse_range(std::string_view text) {
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos) {
    throw std::invalid_argument("range must be lo:hi:step, got '" + std::string(text) + "'");
  }
  RangeSpec r{parse_rational(text.substr(0, first)),
              parse_rational(text.substr(first + 1, second - first - 1)),
              parse_rational(text.substr(second + 1))};
  if (r.lo > r.hi) throw std::invalid_argument("range needs lo <= hi");
  if (r.step <= 0) throw std::invalid_argument("range needs step > 0");
  return r;
}

std::array<bool, 3> parse_formats(std::string_view text) {
  std::array<bool, 3> out{false, false, false};
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    out[static_cast<int>(parse_format(std::string(text.substr(start, end - start))))] = true;
    start = end + 1;
  }
  return out;
}

namespace {

SweepRow compute_row(const SweepSpec& spec, const Rational& cs, const Rational& cv) {
  SweepRow row;
  row.cs = cs;
  row.cv = cv;
  const CostParams c(cs, cv);
  if (spec.includes(BidFormat::kSimple)) row.optimum[0] = optimize_simple(c);
  if (spec.includes(BidFormat::kBlock)) row.optimum[1] = optimize_block(c);
  if (spec.includes(BidFormat::kMultipart)) row.optimum[2] = optimize_multipart(c);

  auto ratio = [](const OptimizationResult& e, const OptimizationResult& m) {
    if (m.exact_value == 0) return e.exact_value == 0 ? 1.0 : e.value / m.value;
    return to_double(e.exact_value / m.exact_value);
  };
  const auto& m = row.optimum[2];
  if (m && row.optimum[0]) row.ratio_simple = ratio(*row.optimum[0], *m);
  if (m && row.optimum[1]) row.ratio_block = ratio(*row.optimum[1], *m);

  // Same tie rule as best_format: multi-part, then block, then simple.
  for (int f : {2, 1, 0}) {
    if (!row.optimum[f]) continue;
    bool beats_rest = true;
    for (int g = 0; g < 3; ++g) {
      if (g != f && row.optimum[g] && row.optimum[g]->value > row.optimum[f]->value + kTieTolerance) {
        beats_rest = false;
      }
    }
    if (beats_rest) {
      row.best = static_cast<BidFormat>(f);
      break;
    }
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  const auto cs_values = spec.cs.values();
  const auto cv_values = spec.cv.values();
  const std::size_t total = cs_values.size() * cv_values.size();
  std::vector<SweepRow> rows(total);
  if (spec.includes(BidFormat::kMultipart)) multipart_table();  // build before fanning out

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      rows[k] = compute_row(spec, cs_values[k / cv_values.size()], cv_values[k % cv_values.size()]);
    }
  };
  unsigned workers = spec.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : spec.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(total, 1)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool exact) {
  auto num = [exact](const Rational& v) {
    return exact ? to_exact_string(v) : to_display_string(v);
  };
  out << kSweepHeader << '\n';
  for (const auto& row : rows) {
    out << num(row.cs) << ',' << num(row.cv);
    for (int f = 0; f < 3; ++f) {
      const auto& r = row.optimum[f];
      const int bid_columns = f == 2 ? 2 : 1;
      if (!r) {
        out << std::string(1 + bid_columns, ',');
        continue;
      }
      out << ',' << num(r->exact_value) << ',' << num(r->x);
      if (f == 2) out << ',' << num(r->y);
    }
    out << ',';
    if (row.ratio_simple) out << to_display_string(*row.ratio_simple);
    out << ',';
    if (row.ratio_block) out << to_display_string(*row.ratio_block);
    out << ',';
    if (row.best) out << to_string(*row.best);
    out << '\n';
  }
}

}  // namespace stepbid
