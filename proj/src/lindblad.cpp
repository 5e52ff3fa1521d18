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

#include "qfib/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfib {

namespace {

// Hermitian part; kills accumulated floating-point asymmetry.
CMat herm(const CMat& m) { return 0.5 * (m + m.adjoint()); }

// -i*beta1: Hermitian generator whose operator norm equals ‖beta1‖.
CMat neg_i_beta1(const LindbladModel& m, const ContinuousGauge& g) {
  const int d = m.dim;
  const int J = m.jumps();
  CMat G = m.dH + g.h00 * CMat::Identity(d, d);
  for (int j = 0; j < J; ++j) {
    const CMat& L = m.collapse[static_cast<size_t>(j)];
    const CMat& dL = m.dcollapse[static_cast<size_t>(j)];
    G += Complex(0, -0.5) * (dL.adjoint() * L - L.adjoint() * dL);
    G += g.hvec(j) * L.adjoint() + std::conj(g.hvec(j)) * L;
    for (int k = 0; k < J; ++k) {
      G += g.hmat(j, k) * L.adjoint() * m.collapse[static_cast<size_t>(k)];
    }
  }
  return herm(G);
}

// Per-jump combination entering alpha1 and the stacked Schur block.
CMat jump_combination(const LindbladModel& m, const ContinuousGauge& g, int j) {
  const int d = m.dim;
  CMat mj = g.hvec(j) * CMat::Identity(d, d) +
            Complex(0, 1) * m.dcollapse[static_cast<size_t>(j)];
  for (int k = 0; k < m.jumps(); ++k) {
    mj += g.hmat(j, k) * m.collapse[static_cast<size_t>(k)];
  }
  return mj;
}

void check_gauge(const LindbladModel& m, const ContinuousGauge& g) {
  const int J = m.jumps();
  if (g.hvec.size() != J || g.hmat.rows() != J || g.hmat.cols() != J) {
    throw std::invalid_argument("lindblad gauge: size differs from the jump count");
  }
  if (J > 0 && hermiticity_defect(g.hmat) > 1e-12 * (1.0 + g.hmat.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("lindblad gauge: hmat is not Hermitian");
  }
}

// [[λ I_d, M_1†, ..., M_J†], [M stack, I_{Jd}]]; PSD iff λ ≥ ‖alpha1‖.
CMat alpha1_block(const LindbladModel& m, const ContinuousGauge& g, double lambda) {
  const int d = m.dim;
  const int J = m.jumps();
  CMat blk = CMat::Zero(d + J * d, d + J * d);
  blk.topLeftCorner(d, d) = lambda * CMat::Identity(d, d);
  if (J > 0) {
    blk.bottomRightCorner(J * d, J * d) = CMat::Identity(J * d, J * d);
    for (int j = 0; j < J; ++j) {
      const CMat mj = jump_combination(m, g, j);
      blk.block(d + j * d, 0, d, d) = mj;
      blk.block(0, d + j * d, d, d) = mj.adjoint();
    }
  }
  return blk;
}

// Shared variable layout for the rate SDPs: [λ][μ] prefix (as requested)
// followed by the gauge parameters.
struct RateProblem {
  sdp::Problem prob;
  int nv = 0;
};

RateProblem build_rate_problem(const LindbladModel& m, bool with_mu, double mu_cost) {
  const int J = m.jumps();
  const int ng = continuous_gauge_param_count(J);
  const int lead = with_mu ? 2 : 1;
  RateProblem rp;
  rp.nv = lead + ng;
  rp.prob.cost = RVec::Zero(rp.nv);
  rp.prob.cost(0) = 1.0;
  if (with_mu) rp.prob.cost(1) = mu_cost;

  rp.prob.blocks.push_back(sdp::block_from_affine(rp.nv, [&, lead](const RVec& x) {
    return alpha1_block(m, continuous_gauge_from_params(x.tail(rp.nv - lead), J), x(0));
  }));
  if (with_mu) {
    const int d = m.dim;
    for (double sign : {1.0, -1.0}) {
      rp.prob.blocks.push_back(sdp::block_from_affine(rp.nv, [&, sign](const RVec& x) {
        const CMat g = neg_i_beta1(m, continuous_gauge_from_params(x.tail(rp.nv - 2), J));
        return CMat(x(1) * CMat::Identity(d, d) + sign * g);
      }));
    }
  }
  return rp;
}

// min ‖beta1‖ over gauges (μ-objective with the two sandwich blocks).
double min_beta_norm(const LindbladModel& m, const sdp::Options& opts) {
  const int J = m.jumps();
  const int ng = continuous_gauge_param_count(J);
  const int nv = 1 + ng;
  sdp::Problem prob;
  prob.cost = RVec::Zero(nv);
  prob.cost(0) = 1.0;
  const int d = m.dim;
  for (double sign : {1.0, -1.0}) {
    prob.blocks.push_back(sdp::block_from_affine(nv, [&, sign](const RVec& x) {
      const CMat g = neg_i_beta1(m, continuous_gauge_from_params(x.tail(ng), J));
      return CMat(x(0) * CMat::Identity(d, d) + sign * g);
    }));
  }
  const sdp::Result res = sdp::solve(prob, opts);
  if (!res.ok()) throw SolverError("min ‖beta1‖ solve failed: " + res.diagnostics());
  return std::max(0.0, res.value);
}

// Largest root of x = base + dt·(c1 + c2·√x), the implicit-Euler update for
// the affine-in-√F majorant with intercept c1 and slope c2.
double implicit_root(double base, double dt, double c1, double c2) {
  const double half = 0.5 * dt * c2;
  const double u = half + std::sqrt(half * half + std::max(0.0, base + dt * c1));
  return u * u;
}

}  // namespace

LindbladModel make_lindblad(int dim, CMat h, CMat dh, std::vector<CMat> collapse,
                            std::vector<CMat> dcollapse) {
  if (dim < 1) throw std::invalid_argument("make_lindblad: dim must be positive");
  auto check_dim = [dim](const CMat& m, const char* what) {
    if (m.rows() != dim || m.cols() != dim) {
      throw std::invalid_argument(std::string("make_lindblad: ") + what + " is not dim x dim");
    }
  };
  check_dim(h, "H");
  check_dim(dh, "dH");
  auto check_herm = [](const CMat& m, const char* what) {
    if (hermiticity_defect(m) > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff())) {
      throw std::invalid_argument(std::string("make_lindblad: ") + what +
                                  " is not Hermitian within 1e-12");
    }
  };
  check_herm(h, "H");
  check_herm(dh, "dH");
  if (collapse.size() != dcollapse.size()) {
    throw std::invalid_argument("make_lindblad: collapse and dcollapse lengths differ");
  }
  for (size_t j = 0; j < collapse.size(); ++j) {
    check_dim(collapse[j], "collapse operator");
    check_dim(dcollapse[j], "collapse derivative");
  }
  LindbladModel m;
  m.dim = dim;
  m.H = std::move(h);
  m.dH = std::move(dh);
  m.collapse = std::move(collapse);
  m.dcollapse = std::move(dcollapse);
  return m;
}

ContinuousGauge zero_gauge(int jumps) {
  if (jumps < 0) throw std::invalid_argument("zero_gauge: negative jump count");
  ContinuousGauge g;
  g.hvec = CVec::Zero(jumps);
  g.hmat = CMat::Zero(jumps, jumps);
  return g;
}

int continuous_gauge_param_count(int jumps) {
  if (jumps < 0) throw std::invalid_argument("continuous gauge: negative jump count");
  return 1 + 2 * jumps + jumps * jumps;
}

ContinuousGauge continuous_gauge_from_params(const RVec& params, int jumps) {
  if (params.size() != continuous_gauge_param_count(jumps)) {
    throw std::invalid_argument("continuous gauge: wrong parameter count");
  }
  ContinuousGauge g = zero_gauge(jumps);
  g.h00 = params(0);
  for (int j = 0; j < jumps; ++j) {
    g.hvec(j) = Complex(params(1 + 2 * j), params(2 + 2 * j));
  }
  if (jumps > 0) {
    // Reuse the Hermitian packing of the discrete gauge matrices.
    CMat hm = CMat::Zero(jumps, jumps);
    int idx = 1 + 2 * jumps;
    for (int k = 0; k < jumps; ++k) hm(k, k) = params(idx++);
    for (int k = 0; k < jumps; ++k) {
      for (int j = k + 1; j < jumps; ++j) {
        const double re = params(idx++);
        const double im = params(idx++);
        hm(k, j) = Complex(re, im);
        hm(j, k) = Complex(re, -im);
      }
    }
    g.hmat = hm;
  }
  return g;
}

CMat beta1(const LindbladModel& m, const ContinuousGauge& g) {
  check_gauge(m, g);
  return Complex(0, 1) * neg_i_beta1(m, g);
}

CMat alpha1(const LindbladModel& m, const ContinuousGauge& g) {
  check_gauge(m, g);
  CMat acc = CMat::Zero(m.dim, m.dim);
  for (int j = 0; j < m.jumps(); ++j) {
    const CMat mj = jump_combination(m, g, j);
    acc += mj.adjoint() * mj;
  }
  return acc;
}

double rate_bound(const LindbladModel& m, double F, const sdp::Options& opts) {
  if (F < 0.0) throw std::invalid_argument("rate_bound: F must be nonnegative");
  const double sqf = std::sqrt(F);
  // With √F = 0 the μ variable carries no cost and the sandwich blocks leave
  // it unbounded, which destroys the dual interior; solve the pure ‖alpha1‖
  // minimization instead.
  const bool with_mu = sqf > 1e-12;
  const RateProblem rp = build_rate_problem(m, with_mu, sqf);
  const sdp::Result res = sdp::solve(rp.prob, opts);
  if (!res.ok()) throw SolverError("rate solve failed: " + res.diagnostics());
  return 4.0 * std::max(0.0, res.value);
}

std::vector<double> integrate_bound(const LindbladModel& m, double T, int steps,
                                    const sdp::Options& opts) {
  if (!(T > 0.0)) throw std::invalid_argument("integrate_bound: T must be positive");
  if (steps < 10) throw std::invalid_argument("integrate_bound: need at least 10 steps");

  const int J = m.jumps();

  // One certified sweep at fixed step count. Each step finds the largest root
  // of x = F_k + Δt·rate(x)/1 via a sequence of affine-in-√x majorants: a
  // gauge fixed at any point yields rate(x) ≤ 4(‖α1‖ + ‖β1‖√x), whose largest
  // implicit-Euler root is closed-form and upper-bounds the exact root. Every
  // iterate is therefore a valid bound, so early termination is safe.
  auto sweep = [&](int nsteps) {
    std::vector<double> curve(static_cast<size_t>(nsteps) + 1, 0.0);
    const double dt = T / static_cast<double>(nsteps);
    const ContinuousGauge zg = zero_gauge(J);
    double c1 = 4.0 * op_norm(alpha1(m, zg));
    double c2 = 4.0 * op_norm(beta1(m, zg));
    for (int k = 0; k < nsteps; ++k) {
      const double base = curve[static_cast<size_t>(k)];
      double x = implicit_root(base, dt, c1, c2);
      for (int it = 0; it < 25; ++it) {
        const double sqf = std::sqrt(x);
        const bool with_mu = sqf > 1e-12;
        const RateProblem rp = build_rate_problem(m, with_mu, sqf);
        const sdp::Result res = sdp::solve(rp.prob, opts);
        if (!res.ok()) throw SolverError("rate solve failed during integration: " +
                                         res.diagnostics());
        const int lead = with_mu ? 2 : 1;
        const ContinuousGauge gg =
            continuous_gauge_from_params(res.x.tail(rp.nv - lead), J);
        c1 = 4.0 * op_norm(alpha1(m, gg));
        c2 = 4.0 * op_norm(beta1(m, gg));
        const double xn = std::min(x, implicit_root(base, dt, c1, c2));
        const bool done = x - xn <= 1e-9 * (1.0 + x);
        x = xn;
        if (done) break;
      }
      curve[static_cast<size_t>(k) + 1] = x;
    }
    return curve;
  };

  std::vector<double> curve = sweep(steps);
  int nsteps = steps;
  for (int halving = 0; halving < 8; ++halving) {
    const int finer = nsteps * 2;
    std::vector<double> refined = sweep(finer);
    const double delta = std::abs(refined.back() - curve.back());
    curve = std::move(refined);
    nsteps = finer;
    if (delta <= 0.005 * std::max(curve.back(), 1e-12)) break;
  }
  return curve;
}

SpanResult classify_span(const LindbladModel& m, const sdp::Options& opts) {
  const int J = m.jumps();
  const int ng = continuous_gauge_param_count(J);
  const int d = m.dim;

  // beta1 is affine in the gauge parameters; feasibility of beta1 = 0 is a
  // real linear least-squares problem on the stacked (Re, Im) entries.
  const CMat g0 = neg_i_beta1(m, zero_gauge(J));
  std::vector<CMat> cols(static_cast<size_t>(ng));
  for (int i = 0; i < ng; ++i) {
    RVec e = RVec::Zero(ng);
    e(i) = 1.0;
    cols[static_cast<size_t>(i)] = neg_i_beta1(m, continuous_gauge_from_params(e, J)) - g0;
  }
  RMat a(2 * d * d, ng);
  RVec rhs(2 * d * d);
  for (int i = 0; i < ng; ++i) {
    const CMat& c = cols[static_cast<size_t>(i)];
    a.col(i).head(d * d) = Eigen::Map<const RVec>(
        RMat(c.real()).data(), d * d);
    a.col(i).tail(d * d) = Eigen::Map<const RVec>(
        RMat(c.imag()).data(), d * d);
  }
  rhs.head(d * d) = -Eigen::Map<const RVec>(RMat(g0.real()).data(), d * d);
  rhs.tail(d * d) = -Eigen::Map<const RVec>(RMat(g0.imag()).data(), d * d);

  const Eigen::ColPivHouseholderQR<RMat> qr(a);
  const RVec x0 = qr.solve(rhs);
  const double residual = (a * x0 - rhs).norm();

  SpanResult out;
  out.in_span = residual < 1e-9;
  if (!out.in_span) {
    const double mb = min_beta_norm(m, opts);
    out.coefficient = 4.0 * mb * mb;
    return out;
  }

  // Minimize ‖alpha1‖ on the affine solution set x0 + null(a)·y.
  Eigen::JacobiSVD<RMat> svd(a, Eigen::ComputeFullV);
  const double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > std::max(1e-12, 1e-10 * smax)) ++rank;
  }
  const RMat null_basis = svd.matrixV().rightCols(ng - rank);
  const int nn = static_cast<int>(null_basis.cols());

  const int nv = 1 + nn;
  sdp::Problem prob;
  prob.cost = RVec::Zero(nv);
  prob.cost(0) = 1.0;
  prob.blocks.push_back(sdp::block_from_affine(nv, [&](const RVec& v) {
    const RVec params = x0 + null_basis * v.tail(nn);
    return alpha1_block(m, continuous_gauge_from_params(params, J), v(0));
  }));
  const sdp::Result res = sdp::solve(prob, opts);
  if (!res.ok()) {
    throw SolverError("constrained ‖alpha1‖ solve failed: " + res.diagnostics());
  }
  out.coefficient = 4.0 * std::max(0.0, res.value);
  return out;
}

}  // namespace qfib
