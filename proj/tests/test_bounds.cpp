// Copyright 2026 The qfibounds Authors
//
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

#include <cmath>

#include "doctest.h"

#include "qfib/bounds.hpp"
#include "qfib/channel.hpp"

using namespace qfib;

namespace {

// Synthetic convex-looking trade-off table; no solver involved.
GTable synthetic_table(double l, double r, int p) {
  GTable gt;
  gt.l = l;
  gt.r = r;
  gt.b.resize(static_cast<size_t>(p));
  gt.g.resize(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) {
    const double t = p == 1 ? 1.0 : static_cast<double>(j) / (p - 1);
    const double b = l + (r - l) * t;
    gt.b[static_cast<size_t>(j)] = b;
    // Decreasing toward r^2; stays >= r^2.
    gt.g[static_cast<size_t>(j)] = r * r + (1.0 - t) * (1.0 - t) * 0.7 * r * r;
  }
  return gt;
}

const GTable& perp_table() {
  static const GTable gt = g_table(build_model({Model::DephasingPerp, 0.75, 0.0}), 200);
  return gt;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("kind tokens round-trip and unknown tokens fail") {
  for (BoundKind k : all_bound_kinds) {
    BoundKind back;
    REQUIRE(parse_kind(kind_name(k), back));
    CHECK(back == k);
  }
  BoundKind out;
  CHECK_FALSE(parse_kind("no_such_bound", out));
  CHECK_FALSE(parse_kind("", out));
}

TEST_CASE("every kind gives 4 min g at a single use") {
  const GTable gt = synthetic_table(0.2, 0.6, 50);
  const double expect = 4.0 * gt.g.back();  // min over the table is g(r) = r^2
  for (BoundKind k : all_bound_kinds) {
    const BoundSeries s = compute_bound(k, gt, 1);
    REQUIRE(s.values.size() == 1);
    if (!s.applicable) continue;
    CHECK(s.values[0] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("parallel bound matches a direct minimization") {
  const GTable gt = synthetic_table(0.15, 0.5, 40);
  const BoundSeries s = bound_parallel(gt, 6);
  for (int n = 1; n <= 6; ++n) {
    double expect = std::numeric_limits<double>::infinity();
    for (int j = 0; j < gt.size(); ++j) {
      const double g = gt.g[static_cast<size_t>(j)], b = gt.b[static_cast<size_t>(j)];
      expect = std::min(expect, 4.0 * (n * g + n * (n - 1.0) * b * b));
    }
    CHECK(s.values[static_cast<size_t>(n) - 1] == doctest::Approx(expect));
  }
}

TEST_CASE("closed forms match their formulas at the recorded argmin") {
  const GTable gt = synthetic_table(0.1, 0.4, 30);
  const int n = 7;
  const BoundSeries old = bound_ad_old(gt, n);
  const BoundSeries cf = bound_closed_form(gt, n);
  const size_t jo = static_cast<size_t>(old.argmin[static_cast<size_t>(n) - 1]);
  const size_t jc = static_cast<size_t>(cf.argmin[static_cast<size_t>(n) - 1]);
  const double go = gt.g[jo], bo = gt.b[jo];
  const double gc = gt.g[jc], bc = gt.b[jc];
  CHECK(old.values[static_cast<size_t>(n) - 1] ==
        doctest::Approx(4.0 * (n * go + n * (n - 1.0) * bo * (bo + 2.0 * std::sqrt(go)))));
  CHECK(cf.values[static_cast<size_t>(n) - 1] ==
        doctest::Approx(4.0 * (n * gc + n * (n - 1.0) * bc * std::sqrt(gc))));
}

TEST_CASE("asymptotic bound is inapplicable when l = 0 and defined when l > 0") {
  const GTable zero_l = synthetic_table(0.0, 0.5, 25);
  const BoundSeries na = bound_asymptotic(zero_l, 4);
  CHECK_FALSE(na.applicable);
  for (double v : na.values) CHECK(std::isnan(v));

  const GTable pos_l = synthetic_table(0.2, 0.5, 25);
  const BoundSeries ok = bound_asymptotic(pos_l, 4);
  CHECK(ok.applicable);
  const int n = 4;
  const size_t j = static_cast<size_t>(ok.argmin[static_cast<size_t>(n) - 1]);
  const double g = pos_l.g[j], b = pos_l.b[j];
  CHECK(ok.values[static_cast<size_t>(n) - 1] ==
        doctest::Approx(4.0 * (n * g + n * (n - 1.0) * b * b +
                               n * std::log(static_cast<double>(n)) * (g - b * b))));
}

TEST_CASE("iterative adaptive recursion matches a hand-rolled loop") {
  const GTable gt = synthetic_table(0.12, 0.45, 35);
  const int nmax = 9;
  const BoundSeries s = bound_ad_iter(gt, nmax);
  double acc = 0.0;
  for (int n = 1; n <= nmax; ++n) {
    double inc = std::numeric_limits<double>::infinity();
    for (int j = 0; j < gt.size(); ++j) {
      const double g = gt.g[static_cast<size_t>(j)], b = gt.b[static_cast<size_t>(j)];
      inc = std::min(inc, g + 2.0 * b * std::sqrt(acc));
    }
    acc += inc;
    CHECK(s.values[static_cast<size_t>(n) - 1] == doctest::Approx(4.0 * acc));
  }
}

TEST_CASE("superposition bound runs one accumulator per grid point") {
  const GTable gt = synthetic_table(0.12, 0.45, 20);
  const int nmax = 8;
  const BoundSeries s = bound_cs_iter(gt, nmax);
  std::vector<double> acc(static_cast<size_t>(gt.size()), 0.0);
  for (int n = 1; n <= nmax; ++n) {
    double lowest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < gt.size(); ++j) {
      const double g = gt.g[static_cast<size_t>(j)], b = gt.b[static_cast<size_t>(j)];
      acc[static_cast<size_t>(j)] += g + 2.0 * b * std::sqrt(acc[static_cast<size_t>(j)]);
      lowest = std::min(lowest, acc[static_cast<size_t>(j)]);
    }
    CHECK(s.values[static_cast<size_t>(n) - 1] == doctest::Approx(4.0 * lowest));
  }
}

TEST_CASE("ordering chain holds on the solved dephasing table") {
  const int nmax = 60;
  const BoundSeries par = bound_parallel(perp_table(), nmax);
  const BoundSeries dp = bound_parallel_dp(perp_table(), nmax);
  const BoundSeries adi = bound_ad_iter(perp_table(), nmax);
  const BoundSeries cs = bound_cs_iter(perp_table(), nmax);
  const BoundSeries cf = bound_closed_form(perp_table(), nmax);
  const BoundSeries old = bound_ad_old(perp_table(), nmax);
  const BoundSeries asym = bound_asymptotic(perp_table(), nmax);
  REQUIRE(asym.applicable);
  for (int i = 0; i < nmax; ++i) {
    const size_t k = static_cast<size_t>(i);
    // Mixing representations only helps; one representation per curve caps both.
    CHECK(dp.values[k] <= par.values[k] + 1e-9 * (1.0 + par.values[k]));
    CHECK(dp.values[k] <= adi.values[k] + 1e-9 * (1.0 + adi.values[k]));
    CHECK(par.values[k] <= cs.values[k] + 1e-6);
    CHECK(adi.values[k] <= cs.values[k] + 1e-6);
    CHECK(cs.values[k] <= cf.values[k] + 1e-6);
    CHECK(cf.values[k] <= old.values[k] + 1e-6);
    if (i >= 1) CHECK(cs.values[k] <= asym.values[k] + 1e-6);
  }
}

TEST_CASE("bounds never decrease with n") {
  for (BoundKind k : all_bound_kinds) {
    const BoundSeries s = compute_bound(k, perp_table(), 40);
    if (!s.applicable) continue;
    for (size_t i = 1; i < s.values.size(); ++i) {
      CHECK(s.values[i] >= s.values[i - 1] - 1e-9 * (1.0 + s.values[i - 1]));
    }
  }
}

TEST_CASE("dynamic program equals the parallel bound on a one-point table") {
  GTable single;
  single.l = 0.3;
  single.r = 0.3;
  single.b = {0.3};
  single.g = {0.09};
  const int nmax = 12;
  const BoundSeries dp = bound_parallel_dp(single, nmax);
  const BoundSeries par = bound_parallel(single, nmax);
  for (int i = 0; i < nmax; ++i) {
    // Never above the parallel value (exact float guarantee), and with only
    // one representation the two agree up to accumulation rounding.
    CHECK(dp.values[static_cast<size_t>(i)] <= par.values[static_cast<size_t>(i)]);
    CHECK(dp.values[static_cast<size_t>(i)] >=
          par.values[static_cast<size_t>(i)] * (1.0 - 1e-12));
  }
}

TEST_CASE("dynamic program strictly improves on a heterogeneous table") {
  // Two representations: one with low g, one with low b. Mixing them beats
  // any single choice for mid-size n on this table.
  GTable two;
  two.l = 0.05;
  two.r = 0.5;
  two.b = {0.05, 0.5};
  two.g = {0.40, 0.25};
  const int nmax = 20;
  const BoundSeries dp = bound_parallel_dp(two, nmax, 400);
  const BoundSeries par = bound_parallel(two, nmax);
  bool improved = false;
  for (int i = 0; i < nmax; ++i) {
    REQUIRE(dp.values[static_cast<size_t>(i)] <= par.values[static_cast<size_t>(i)] + 1e-12);
    if (dp.values[static_cast<size_t>(i)] < par.values[static_cast<size_t>(i)] - 1e-9) {
      improved = true;
    }
  }
  CHECK(improved);
}

TEST_CASE("dynamic program rejects an oversized state space") {
  CHECK_THROWS_AS(bound_parallel_dp(perp_table(), 100000, 4000000), std::invalid_argument);
}

TEST_CASE("degenerate tables yield identically zero bounds") {
  GTable zero;
  zero.l = 0.0;
  zero.r = 0.0;
  zero.b = {0.0};
  zero.g = {0.0};
  for (BoundKind k : all_bound_kinds) {
    const BoundSeries s = compute_bound(k, zero, 5);
    if (!s.applicable) continue;
    for (double v : s.values) CHECK(v == 0.0);
  }
}

TEST_CASE("invalid nmax is rejected") {
  CHECK_THROWS_AS(bound_parallel(perp_table(), 0), std::invalid_argument);
  CHECK_THROWS_AS(bound_cs_iter(perp_table(), -2), std::invalid_argument);
}

TEST_CASE("known anchors on perpendicular dephasing at p=0.75") {
  const BoundSeries adi = bound_ad_iter(perp_table(), 3);
  CHECK(adi.values[1] == doctest::Approx(3.0).epsilon(0.01));
  CHECK(adi.values[2] == doctest::Approx(5.73).epsilon(0.004));
}

}  // TEST_SUITE
