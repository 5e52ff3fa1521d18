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

#include "qfib/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qfib/optim.hpp"

namespace qfib {

namespace {

// All SDPs run on a copy of the channel whose derivatives are divided by
// s = √‖α(0)‖, so the solver always sees O(1) data. Norms transform as
// ‖α̃‖ → ‖α̃‖/s² and ‖β̃‖ → ‖β̃‖/s.
struct Scaled {
  Channel ch;
  double s = 0.0;  // 0 flags a channel with (numerically) zero derivatives
};

Scaled scale_channel(const Channel& ch) {
  const double a0 = op_norm(alpha_matrix(ch));
  const double s = std::sqrt(a0);
  if (s < 1e-14) return {ch, 0.0};
  Scaled out{ch, s};
  for (CMat& dk : out.ch.dkraus) dk /= s;
  return out;
}

// min λ s.t. ‖α̃(h)‖ ≤ λ, ‖β̃(h)‖ ≤ b with b fixed; returns the scaled g(b).
double solve_g_scaled(const Channel& sc, double b, const sdp::Options& sopts) {
  const int rk = sc.rank();
  const int np = 1 + gauge_param_count(rk);

  auto attempt = [&](double bb) {
    sdp::Problem prob;
    prob.cost = RVec::Zero(np);
    prob.cost(0) = 1.0;
    prob.blocks.push_back(sdp::block_from_affine(np, [&](const RVec& x) {
      return alpha_block_matrix(sc, x(0), gauge_from_params(x.tail(np - 1), rk));
    }));
    prob.blocks.push_back(sdp::block_from_affine(np, [&](const RVec& x) {
      return beta_block_matrix(sc, bb, gauge_from_params(x.tail(np - 1), rk));
    }));
    return sdp::solve(prob, sopts);
  };

  sdp::Result res = attempt(b);
  if (!res.ok()) {
    // The feasible set can have empty interior exactly at b = l; a hairline
    // relaxation restores strict feasibility without moving the value.
    sdp::Result retry = attempt(b * (1.0 + 1e-9) + 1e-12);
    if (!retry.ok()) {
      throw SolverError("g(b) solve failed: " + res.diagnostics());
    }
    res = retry;
  }
  return std::max(0.0, res.value);
}

double compute_r_scaled(const Channel& sc, const sdp::Options& sopts) {
  const int rk = sc.rank();
  const int np = 1 + gauge_param_count(rk);
  sdp::Problem prob;
  prob.cost = RVec::Zero(np);
  prob.cost(0) = 1.0;
  prob.blocks.push_back(sdp::block_from_affine(np, [&](const RVec& x) {
    return alpha_block_matrix(sc, x(0), gauge_from_params(x.tail(np - 1), rk));
  }));
  const sdp::Result res = sdp::solve(prob, sopts);
  if (!res.ok()) throw SolverError("min ‖α̃‖ solve failed: " + res.diagnostics());
  return std::sqrt(std::max(0.0, res.value));
}

double compute_l_scaled(const Channel& sc, const sdp::Options& sopts) {
  const int rk = sc.rank();
  const int np = 1 + gauge_param_count(rk);
  sdp::Problem prob;
  prob.cost = RVec::Zero(np);
  prob.cost(0) = 1.0;
  prob.blocks.push_back(sdp::block_from_affine(np, [&](const RVec& x) {
    return beta_block_matrix(sc, x(0), gauge_from_params(x.tail(np - 1), rk));
  }));
  const sdp::Result res = sdp::solve(prob, sopts);
  if (!res.ok()) throw SolverError("min ‖β̃‖ solve failed: " + res.diagnostics());
  return std::max(0.0, res.value);
}

}  // namespace

int gauge_param_count(int rank) {
  if (rank < 1) throw std::invalid_argument("gauge_param_count: rank must be positive");
  return rank * rank;
}

GaugeMatrix gauge_from_params(const RVec& params, int rank) {
  if (params.size() != gauge_param_count(rank)) {
    throw std::invalid_argument("gauge_from_params: wrong parameter count");
  }
  GaugeMatrix h = CMat::Zero(rank, rank);
  int idx = 0;
  for (int k = 0; k < rank; ++k) h(k, k) = params(idx++);
  for (int k = 0; k < rank; ++k) {
    for (int j = k + 1; j < rank; ++j) {
      const double re = params(idx++);
      const double im = params(idx++);
      h(k, j) = Complex(re, im);
      h(j, k) = Complex(re, -im);
    }
  }
  return h;
}

RVec params_from_gauge(const GaugeMatrix& h) {
  const int rank = static_cast<int>(h.rows());
  if (h.cols() != rank) throw std::invalid_argument("params_from_gauge: non-square matrix");
  if (hermiticity_defect(h) > 1e-12 * (1.0 + h.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("params_from_gauge: matrix is not Hermitian");
  }
  RVec params(gauge_param_count(rank));
  int idx = 0;
  for (int k = 0; k < rank; ++k) params(idx++) = h(k, k).real();
  for (int k = 0; k < rank; ++k) {
    for (int j = k + 1; j < rank; ++j) {
      params(idx++) = h(k, j).real();
      params(idx++) = h(k, j).imag();
    }
  }
  return params;
}

CMat alpha_block_matrix(const Channel& ch, double lambda, const GaugeMatrix& h) {
  const Channel gch = apply_gauge(ch, h);
  const int d = ch.dim;
  const int rk = ch.rank();
  CMat a = CMat::Zero(d + d * rk, d + d * rk);
  a.topLeftCorner(d, d) = lambda * CMat::Identity(d, d);
  a.bottomRightCorner(d * rk, d * rk) = CMat::Identity(d * rk, d * rk);
  for (int k = 0; k < rk; ++k) {
    a.block(d + k * d, 0, d, d) = gch.dkraus[static_cast<size_t>(k)];
    a.block(0, d + k * d, d, d) = gch.dkraus[static_cast<size_t>(k)].adjoint();
  }
  return a;
}

CMat beta_block_matrix(const Channel& ch, double b, const GaugeMatrix& h) {
  const CMat x = Complex(0.0, 1.0) * beta_matrix(apply_gauge(ch, h));
  const int d = ch.dim;
  CMat m = CMat::Zero(2 * d, 2 * d);
  m.topLeftCorner(d, d) = b * CMat::Identity(d, d);
  m.bottomRightCorner(d, d) = b * CMat::Identity(d, d);
  m.topRightCorner(d, d) = x;
  m.bottomLeftCorner(d, d) = x.adjoint();
  return m;
}

double compute_r(const Channel& ch, const GaugeOptions& opts) {
  const Scaled sc = scale_channel(ch);
  if (sc.s == 0.0) return 0.0;
  return sc.s * compute_r_scaled(sc.ch, opts.sdp);
}

double compute_l(const Channel& ch, const GaugeOptions& opts) {
  const Scaled sc = scale_channel(ch);
  if (sc.s == 0.0) return 0.0;
  return sc.s * compute_l_scaled(sc.ch, opts.sdp);
}

double g_of_b(const Channel& ch, double b, const GaugeOptions& opts) {
  if (b < 0.0) throw std::invalid_argument("g_of_b: b must be nonnegative");
  const Scaled sc = scale_channel(ch);
  if (sc.s == 0.0) return 0.0;
  const double l = sc.s * compute_l_scaled(sc.ch, opts.sdp);
  if (b < l - std::max(1e-7, 1e-7 * l)) {
    std::ostringstream os;
    os << "g_of_b: b = " << b << " is below the feasibility threshold l = " << l;
    throw InfeasiblePoint(os.str());
  }
  const double beff = std::max(b, l);
  return sc.s * sc.s * solve_g_scaled(sc.ch, beff / sc.s, opts.sdp);
}

GTable g_table(const Channel& ch, int p, const GaugeOptions& opts) {
  if (p < 1) throw std::invalid_argument("g_table: grid size must be positive");

  GTable gt;
  const Scaled sc = scale_channel(ch);
  if (sc.s == 0.0) {
    gt.l = gt.r = 0.0;
    gt.b = {0.0};
    gt.g = {0.0};
    return gt;
  }

  gt.l = sc.s * compute_l_scaled(sc.ch, opts.sdp);
  gt.r = sc.s * compute_r_scaled(sc.ch, opts.sdp);
  if (gt.r < gt.l) gt.r = gt.l;  // solver noise; mathematically l ≤ r

  if (gt.r - gt.l <= 1e-7 * std::max(1.0, gt.r)) {
    gt.l = gt.r;
    gt.b = {gt.r};
    gt.g = {gt.r * gt.r};
    return gt;
  }
  if (p < 2) throw std::invalid_argument("g_table: need at least 2 grid points when l < r");

  gt.b.resize(static_cast<size_t>(p));
  gt.g.assign(static_cast<size_t>(p), 0.0);
  for (int j = 0; j < p; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(p - 1);
    gt.b[static_cast<size_t>(j)] = gt.l + (gt.r - gt.l) * t;
  }
  gt.b.front() = gt.l;
  gt.b.back() = gt.r;

  int nthreads = opts.threads > 0 ? opts.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::clamp(nthreads, 1, std::min(8, p));

  auto run_chunk = [&](int offset) {
    for (int j = offset; j < p; j += nthreads) {
      try {
        gt.g[static_cast<size_t>(j)] =
            sc.s * sc.s * solve_g_scaled(sc.ch, gt.b[static_cast<size_t>(j)] / sc.s, opts.sdp);
      } catch (const SolverError& e) {
        throw SolverError("g_table: grid point " + std::to_string(j) + ": " + e.what());
      }
    }
  };

  if (nthreads == 1) {
    run_chunk(0);
  } else {
    std::vector<std::future<void>> futs;
    futs.reserve(static_cast<size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) {
      futs.push_back(std::async(std::launch::async, run_chunk, t));
    }
    std::exception_ptr first;
    for (auto& f : futs) {
      try {
        f.get();
      } catch (...) {
        if (!first) first = std::current_exception();
      }
    }
    if (first) std::rethrow_exception(first);
  }

  validate_table(gt);
  return gt;
}

double brute_force_g(const Channel& ch, double b) {
  const int rk = ch.rank();
  if (rk > 3) throw std::invalid_argument("brute_force_g: unsupported rank (limit 3)");
  if (b < 0.0) throw std::invalid_argument("brute_force_g: b must be nonnegative");

  const Scaled sc = scale_channel(ch);
  if (sc.s == 0.0) return 0.0;
  const double bs = b / sc.s;

  double best = std::numeric_limits<double>::infinity();
  bool found = false;

  // Exact-penalty objective: convex in h but nonsmooth along the constraint
  // kink, where a simplex can degenerate and stall short of the optimum.
  // Feasible incumbents are tracked on every evaluation, including those
  // inside a simplex move.
  auto objective = [&](const RVec& params) {
    const GaugeMatrix h = gauge_from_params(params, rk);
    const Channel gch = apply_gauge(sc.ch, h);
    const double an = op_norm(alpha_matrix(gch));
    const double bn = op_norm(beta_matrix(gch));
    if (bn <= bs + 1e-9 && an < best) {
      best = an;
      found = true;
    }
    return an + 1e5 * std::max(0.0, bn - bs);
  };

  const int np = gauge_param_count(rk);
  std::mt19937 gen(20240901u);
  std::normal_distribution<double> dist(0.0, 1.0);
  const int nstarts = rk <= 2 ? 24 : 40;
  const double scales[] = {0.3, 1.0, 3.0};

  RVec bestx = RVec::Zero(np);
  double bestf = std::numeric_limits<double>::infinity();
  auto search = [&](const RVec& from, double step, int evals) {
    const NMResult r = nelder_mead(objective, from, step, evals, 1e-14);
    if (r.value < bestf) {
      bestf = r.value;
      bestx = r.x;
    }
  };

  RVec start = RVec::Zero(np);
  search(start, 0.25, 6000);
  for (int i = 0; i < nstarts; ++i) {
    const double sc_i = scales[i % 3];
    for (int k = 0; k < np; ++k) start(k) = sc_i * dist(gen);
    search(start, 0.25 * sc_i, 6000);
  }
  // Restart a collapsed simplex: fresh, shrinking simplexes around the best
  // point recover the progress a degenerate one gave up, and small random
  // jitter breaks the zigzag lock a simplex falls into on the constraint kink.
  for (const double step : {0.1, 1e-2, 1e-3, 1e-4, 1e-3, 1e-4, 1e-5}) {
    search(bestx, step, 12000);
  }
  for (int i = 0; i < 8; ++i) {
    RVec jittered = bestx;
    for (int k = 0; k < np; ++k) jittered(k) += 3e-3 * dist(gen);
    search(jittered, 1e-3, 12000);
  }
  search(bestx, 1e-5, 12000);

  if (!found) throw SolverError("brute_force_g: no feasible gauge located");
  return sc.s * sc.s * best;
}

void validate_table(const GTable& gt) {
  auto fail = [](const std::string& what) { throw SolverError("g-table invariant: " + what); };

  if (gt.b.empty() || gt.b.size() != gt.g.size()) fail("b/g size mismatch or empty");
  if (gt.l > gt.r + 1e-12 * std::max(1.0, gt.r)) fail("l exceeds r");

  const int p = gt.size();
  if (p == 1) {
    if (std::abs(gt.l - gt.r) > 1e-7 * std::max(1.0, gt.r)) {
      fail("single-point table requires l = r");
    }
  } else {
    const double span_tol = 1e-9 * std::max(1.0, gt.r);
    if (std::abs(gt.b.front() - gt.l) > span_tol) fail("left endpoint differs from l");
    if (std::abs(gt.b.back() - gt.r) > span_tol) fail("right endpoint differs from r");
    const double step = (gt.r - gt.l) / static_cast<double>(p - 1);
    for (int j = 0; j < p; ++j) {
      if (std::abs(gt.b[static_cast<size_t>(j)] - (gt.l + step * j)) > span_tol) {
        fail("grid is not an arithmetic progression at index " + std::to_string(j));
      }
    }
  }

  const double mono_tol = 1e-7 * std::max(1.0, gt.g.front());
  for (int j = 0; j + 1 < p; ++j) {
    if (gt.g[static_cast<size_t>(j) + 1] > gt.g[static_cast<size_t>(j)] + mono_tol) {
      fail("g increases along the grid at index " + std::to_string(j + 1));
    }
  }
  for (int j = 0; j < p; ++j) {
    if (gt.g[static_cast<size_t>(j)] < 0.0) fail("negative g value");
  }
  const double rsq = gt.r * gt.r;
  if (std::abs(gt.g.back() - rsq) > 1e-6 * std::max(1.0, rsq)) {
    fail("g at the right endpoint differs from r²");
  }
}

}  // namespace qfib
