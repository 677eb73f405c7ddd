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

// stepbid: evaluate, optimize, sweep, sample and verify expected profits of
// simple, block and multi-part bids.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "stepbid/closedform.hpp"
#include "stepbid/distribution.hpp"
#include "stepbid/oracle.hpp"
#include "stepbid/optimizer.hpp"
#include "stepbid/plot.hpp"
#include "stepbid/sweep.hpp"
#include "stepbid/verify.hpp"

namespace {

using namespace stepbid;

constexpr int kUsageError = 1;
constexpr int kVerifyFailure = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string format;
  bool all = false;
  std::optional<std::string> b, b1, b2, bs, bv;
  std::string cs = "0";
  std::string cv = "0";
  std::optional<std::string> density;
  bool exact = false;
  std::uint64_t seed = 1;
  std::string out = "sweep.csv";
  bool plot = false;
  std::uint64_t n = 1000000;
  std::string cs_range = "0:1:1/20";
  std::string cv_range = "0:1/2:1/40";
  std::string formats = "simple,block,multipart";
  unsigned workers = 0;
  std::size_t points = 1000;
};

std::string num(const Rational& v, bool exact) {
  return exact ? to_exact_string(v) : to_display_string(v);
}

CostParams costs(const Options& o) {
  return CostParams(parse_rational(o.cs), parse_rational(o.cv));
}

// Bid from the flags, rejecting flags that do not belong to the format.
Bid parse_bid(const Options& o) {
  const BidFormat f = parse_format(o.format);
  auto forbid = [](const std::optional<std::string>& flag, const char* name, const char* fmt) {
    if (flag) throw UsageError(std::string(name) + " does not apply to " + fmt + " bids");
  };
  switch (f) {
    case BidFormat::kSimple:
      forbid(o.bs, "--bs", "simple");
      forbid(o.bv, "--bv", "simple");
      if (o.b && !o.b1 && !o.b2) return SimpleBid(parse_rational(*o.b));
      if (!o.b && o.b1 && o.b2) return SimpleBid(parse_rational(*o.b1), parse_rational(*o.b2));
      throw UsageError("simple bids need --b, or both --b1 and --b2");
    case BidFormat::kBlock:
      forbid(o.b1, "--b1", "block");
      forbid(o.b2, "--b2", "block");
      forbid(o.bs, "--bs", "block");
      forbid(o.bv, "--bv", "block");
      if (!o.b) throw UsageError("block bids need --b");
      return BlockBid(parse_rational(*o.b));
    case BidFormat::kMultipart:
      forbid(o.b, "--b", "multipart");
      forbid(o.b1, "--b1", "multipart");
      forbid(o.b2, "--b2", "multipart");
      if (!o.bs || !o.bv) throw UsageError("multipart bids need --bs and --bv");
      return MultipartBid(parse_rational(*o.bs), parse_rational(*o.bv));
  }
  throw UsageError("unknown format");
}

void print_bid(std::ostream& out, const Bid& bid, bool exact) {
  if (const auto* s = std::get_if<SimpleBid>(&bid)) {
    if (s->price1 == s->price2) {
      out << "b=" << num(s->price1, exact) << '\n';
    } else {
      out << "b1=" << num(s->price1, exact) << "\nb2=" << num(s->price2, exact) << '\n';
    }
  } else if (const auto* k = std::get_if<BlockBid>(&bid)) {
    out << "b=" << num(k->threshold, exact) << '\n';
  } else {
    const auto& m = std::get<MultipartBid>(bid);
    out << "bs=" << num(m.startup, exact) << "\nbv=" << num(m.variable, exact) << '\n';
  }
}

// Closed form for the reference density, when one exists for this bid.
std::optional<Rational> closed_form(const Bid& bid, const CostParams& c) {
  if (const auto* s = std::get_if<SimpleBid>(&bid)) {
    if (s->price1 != s->price2) return std::nullopt;
    return expected_simple(s->price1, c);
  }
  if (const auto* k = std::get_if<BlockBid>(&bid)) return expected_block(k->threshold, c);
  const auto& m = std::get<MultipartBid>(bid);
  return expected_multipart(m.startup, m.variable, c);
}

StepDensity density_of(const Options& o) {
  return o.density ? load_density(*o.density) : default_density();
}

int cmd_eval(const Options& o) {
  const Bid bid = parse_bid(o);
  const CostParams c = costs(o);
  const StepDensity d = density_of(o);
  const Rational oracle = exact_expected(bid, c, d);
  std::cout << "format=" << to_string(format_of(bid)) << '\n';
  print_bid(std::cout, bid, o.exact);
  std::cout << "cs=" << num(c.startup, o.exact) << "\ncv=" << num(c.variable, o.exact) << '\n';
  std::optional<Rational> closed;
  if (!o.density) closed = closed_form(bid, c);
  if (closed) std::cout << "closed_form=" << num(*closed, o.exact) << '\n';
  std::cout << "oracle=" << num(oracle, o.exact) << '\n';
  if (closed) std::cout << "diff=" << num(*closed - oracle, o.exact) << '\n';
  return 0;
}

void print_result(const OptimizationResult& r, bool exact) {
  std::cout << "format=" << to_string(r.format) << '\n';
  if (r.format == BidFormat::kMultipart) {
    std::cout << "bs*=" << num(r.x, exact) << "\nbv*=" << num(r.y, exact) << '\n';
  } else {
    std::cout << "b*=" << num(r.x, exact) << '\n';
  }
  std::cout << "E*=" << num(r.exact_value, exact) << '\n';
  std::cout << "candidates=" << r.candidates.size() << '\n';
  for (const auto& k : r.candidates) {
    std::cout << "  " << to_string(k.kind);
    if (r.format == BidFormat::kMultipart) {
      std::cout << " bs=" << to_display_string(to_double(k.x))
                << " bv=" << to_display_string(to_double(k.y));
    } else {
      std::cout << " b=" << num(k.x, exact);
    }
    std::cout << " E=" << to_display_string(k.value);
    if (!k.note.empty()) std::cout << " (" << k.note << ")";
    std::cout << '\n';
  }
}

int cmd_optimize(const Options& o) {
  const CostParams c = costs(o);
  if (o.all == !o.format.empty()) throw UsageError("give exactly one of --format and --all");
  if (!o.all) {
    switch (parse_format(o.format)) {
      case BidFormat::kSimple:
        print_result(optimize_simple(c), o.exact);
        break;
      case BidFormat::kBlock:
        print_result(optimize_block(c), o.exact);
        break;
      case BidFormat::kMultipart:
        print_result(optimize_multipart(c), o.exact);
        break;
    }
    return 0;
  }
  const FormatComparison cmp = best_format(c);
  print_result(cmp.simple, o.exact);
  print_result(cmp.block, o.exact);
  print_result(cmp.multipart, o.exact);
  std::cout << "ratio_S_M=" << to_display_string(cmp.ratio_simple) << '\n';
  std::cout << "ratio_B_M=" << to_display_string(cmp.ratio_block) << '\n';
  std::cout << "best=" << to_string(cmp.best) << '\n';
  return 0;
}

int cmd_sweep(const Options& o) {
  SweepSpec spec;
  spec.cs = parse_range(o.cs_range);
  spec.cv = parse_range(o.cv_range);
  spec.formats = parse_formats(o.formats);
  spec.workers = o.workers;
  const auto rows = run_sweep(spec);
  std::ofstream file(o.out);
  if (!file) throw std::runtime_error("cannot write " + o.out);
  write_csv(file, rows, o.exact);
  file.close();
  if (!file) throw std::runtime_error("failed writing " + o.out);
  std::cout << "rows=" << rows.size() << "\ncsv=" << o.out << '\n';
  if (o.plot) {
    std::filesystem::path prefix(o.out);
    prefix.replace_extension();
    for (const auto& p : write_sweep_plots(rows, spec, prefix)) {
      std::cout << "plot=" << p.string() << '\n';
    }
  }
  return 0;
}

int cmd_sample(const Options& o) {
  if (o.n == 0) throw UsageError("--n must be at least 1");
  const Bid bid = parse_bid(o);
  const CostParams c = costs(o);
  const StepDensity d = density_of(o);
  const McEstimate mc = mc_expected(bid, c, d, o.n, o.seed, o.workers);
  const Rational exact = exact_expected(bid, c, d);
  const double diff = mc.estimate - to_double(exact);
  double z = 0.0;
  if (mc.standard_error > 0.0) {
    z = diff / mc.standard_error;
  } else if (diff != 0.0) {
    z = std::copysign(INFINITY, diff);
  }
  std::cout << "format=" << to_string(format_of(bid)) << '\n';
  print_bid(std::cout, bid, o.exact);
  std::cout << "cs=" << num(c.startup, o.exact) << "\ncv=" << num(c.variable, o.exact) << '\n';
  std::cout << "n=" << mc.samples << "\nseed=" << o.seed << '\n';
  std::cout << "estimate=" << to_display_string(mc.estimate) << '\n';
  std::cout << "stderr=" << to_display_string(mc.standard_error) << '\n';
  std::cout << "exact=" << num(exact, o.exact) << '\n';
  std::cout << "z=" << to_display_string(z) << '\n';
  return 0;
}

int cmd_verify(const Options& o) {
  const VerifyReport report = run_verify(o.seed, o.points);
  print_report(std::cout, report);
  return report.ok() ? 0 : kVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expected profit of simple, block and multi-part bids"};
  app.require_subcommand(1);
  Options o;

  auto add_costs = [&](CLI::App* cmd) {
    cmd->add_option("--cs", o.cs, "start-up cost (decimal or p/q)")->capture_default_str();
    cmd->add_option("--cv", o.cv, "variable cost (decimal or p/q)")->capture_default_str();
    cmd->add_flag("--exact", o.exact, "print exact rationals as p/q");
  };
  auto add_bid = [&](CLI::App* cmd) {
    cmd->add_option("--format", o.format, "simple | block | multipart")->required();
    cmd->add_option("--b", o.b, "simple price (both periods) or block threshold");
    cmd->add_option("--b1", o.b1, "simple price, period 1");
    cmd->add_option("--b2", o.b2, "simple price, period 2");
    cmd->add_option("--bs", o.bs, "multi-part start-up component");
    cmd->add_option("--bv", o.bv, "multi-part variable component");
    cmd->add_option("--density", o.density, "step density file (breakpoints = ..., values = ...)");
  };

  CLI::App* eval = app.add_subcommand("eval", "closed form and exact oracle at one bid");
  add_bid(eval);
  add_costs(eval);

  CLI::App* optimize = app.add_subcommand("optimize", "optimal bids and candidate audit");
  optimize->add_option("--format", o.format, "simple | block | multipart");
  optimize->add_flag("--all", o.all, "optimize all three formats and compare");
  add_costs(optimize);

  CLI::App* sweep = app.add_subcommand("sweep", "optimize over a (c_s, c_v) grid to CSV");
  sweep->add_option("--cs-range", o.cs_range, "lo:hi:step")->capture_default_str();
  sweep->add_option("--cv-range", o.cv_range, "lo:hi:step")->capture_default_str();
  sweep->add_option("--formats", o.formats, "comma-separated formats")->capture_default_str();
  sweep->add_option("--out", o.out, "CSV path")->capture_default_str();
  sweep->add_flag("--plot", o.plot, "also write SVG contour plots next to the CSV");
  sweep->add_flag("--exact", o.exact, "print exact rationals as p/q");
  sweep->add_option("--workers", o.workers, "threads, 0 = all cores")->capture_default_str();

  CLI::App* sample = app.add_subcommand("sample", "Monte Carlo estimate against the exact value");
  add_bid(sample);
  add_costs(sample);
  sample->add_option("--n", o.n, "sample count")->capture_default_str();
  sample->add_option("--seed", o.seed, "stream seed")->capture_default_str();
  sample->add_option("--workers", o.workers, "threads, 0 = all cores")->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "closed forms against the exact oracle");
  verify->add_option("--seed", o.seed, "seed for the random points")->capture_default_str();
  verify->add_option("--points", o.points, "random points per univariate check")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageError;
  }

  try {
    if (eval->parsed()) return cmd_eval(o);
    if (optimize->parsed()) return cmd_optimize(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (sample->parsed()) return cmd_sample(o);
    if (verify->parsed()) return cmd_verify(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}
