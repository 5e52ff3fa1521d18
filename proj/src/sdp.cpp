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

#include "qfib/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qfib::sdp {

namespace {

const char* status_name(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::NearOptimal: return "near-optimal";
    case Status::MaxIters: return "max-iterations";
    case Status::Stalled: return "stalled";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "unknown";
}

// <A, B> = Re tr(A^dag B); real for Hermitian pairs.
double inner(const CMat& a, const CMat& b) {
  return (a.array().conjugate() * b.array()).sum().real();
}

CMat herm(const CMat& m) { return 0.5 * (m + m.adjoint()); }

// Per-block iterate state and per-iteration work matrices.
struct Block {
  CMat S, Z;               // primal slack and dual variable, Hermitian PD
  CMat Winv;               // inverse Nesterov-Todd scaling, W Z W = S
  CMat Zinv;
  CMat Rp;                 // F(x) - S
  std::vector<CMat> G;     // Winv * F_i * Winv, one per kept variable
  double f0_norm = 0.0;
};

// Largest t >= 0 with P + t*D PSD, computed from the Cholesky factor of P.
// Returns a large sentinel when D does not point out of the cone.
double max_step(const CMat& p, const CMat& d) {
  Eigen::LLT<CMat> llt(p);
  if (llt.info() != Eigen::Success) {
    // Rounding can leave an iterate marginally indefinite; a ridge of the
    // size of that rounding restores the factorization.
    const double ridge = 1e-14 * (1.0 + p.cwiseAbs().maxCoeff());
    llt.compute(p + ridge * CMat::Identity(p.rows(), p.cols()));
    if (llt.info() != Eigen::Success) return 0.0;
  }
  const CMat l = llt.matrixL();
  const CMat t1 = l.triangularView<Eigen::Lower>().solve(d);
  CMat y = l.triangularView<Eigen::Lower>().solve(t1.adjoint());
  y = herm(y);
  Eigen::SelfAdjointEigenSolver<CMat> es(y, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= -1e-14) return 1e100;
  return -1.0 / lmin;
}

// Winv = Z^{1/2} (Z^{1/2} S Z^{1/2})^{-1/2} Z^{1/2}; also Z^{-1}.
bool nt_scaling(Block& blk) {
  Eigen::SelfAdjointEigenSolver<CMat> ez(blk.Z);
  if (ez.info() != Eigen::Success || ez.eigenvalues().minCoeff() <= 0.0) return false;
  const RVec zs = ez.eigenvalues().cwiseSqrt();
  const CMat u = ez.eigenvectors();
  const CMat zh = u * zs.asDiagonal() * u.adjoint();
  blk.Zinv = u * ez.eigenvalues().cwiseInverse().asDiagonal() * u.adjoint();

  Eigen::SelfAdjointEigenSolver<CMat> et(herm(zh * blk.S * zh));
  if (et.info() != Eigen::Success || et.eigenvalues().minCoeff() <= 0.0) return false;
  const RVec tis = et.eigenvalues().cwiseSqrt().cwiseInverse();
  const CMat v = et.eigenvectors();
  blk.Winv = herm(zh * (v * tis.asDiagonal() * v.adjoint()) * zh);
  return true;
}

}  // namespace

AffineBlock block_from_affine(int nvars, const std::function<CMat(const RVec&)>& eval) {
  AffineBlock blk;
  blk.F0 = eval(RVec::Zero(nvars));
  blk.F.resize(static_cast<size_t>(nvars));
  for (int i = 0; i < nvars; ++i) {
    RVec e = RVec::Zero(nvars);
    e(i) = 1.0;
    blk.F[static_cast<size_t>(i)] = eval(e) - blk.F0;
  }
  return blk;
}

std::string Result::diagnostics() const {
  std::ostringstream os;
  os << "status=" << status_name(status) << " iters=" << iters
     << " value=" << value << " dual=" << dual_value
     << " pinf=" << pinf << " dinf=" << dinf << " gap=" << gap;
  return os.str();
}

Result solve(const Problem& prob, const Options& opts) {
  const int nall = prob.nvars();
  const size_t nb = prob.blocks.size();
  if (nb == 0) throw std::invalid_argument("sdp::solve: no constraint blocks");

  std::vector<AffineBlock> blocks(nb);
  for (size_t b = 0; b < nb; ++b) {
    const AffineBlock& src = prob.blocks[b];
    if (src.dim() == 0 || src.F0.rows() != src.F0.cols()) {
      throw std::invalid_argument("sdp::solve: block matrices must be square and nonempty");
    }
    if (static_cast<int>(src.F.size()) != nall) {
      throw std::invalid_argument("sdp::solve: block coefficient count differs from nvars");
    }
    const double scale = 1.0 + src.F0.cwiseAbs().maxCoeff();
    if (hermiticity_defect(src.F0) > 1e-10 * scale) {
      throw std::invalid_argument("sdp::solve: non-Hermitian constant block");
    }
    blocks[b].F0 = herm(src.F0);
    blocks[b].F.resize(static_cast<size_t>(nall));
    for (int i = 0; i < nall; ++i) {
      const CMat& fi = src.F[static_cast<size_t>(i)];
      if (fi.rows() != src.dim() || fi.cols() != src.dim()) {
        throw std::invalid_argument("sdp::solve: coefficient block size mismatch");
      }
      if (hermiticity_defect(fi) > 1e-10 * (1.0 + fi.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("sdp::solve: non-Hermitian coefficient block");
      }
      blocks[b].F[static_cast<size_t>(i)] = herm(fi);
    }
  }

  // Variables touching no block would make the Schur system singular; they
  // are fixed at zero. A nonzero cost on such a variable means the objective
  // is unbounded below.
  std::vector<int> keep;
  std::vector<double> vscale;  // per-kept-variable equilibration factor
  for (int i = 0; i < nall; ++i) {
    double mag = 0.0;
    for (const AffineBlock& blk : blocks) {
      mag = std::max(mag, blk.F[static_cast<size_t>(i)].cwiseAbs().maxCoeff());
    }
    if (mag > 1e-14) {
      keep.push_back(i);
      vscale.push_back(mag);
    } else if (std::abs(prob.cost(i)) > 0.0) {
      Result res;
      res.x = RVec::Zero(nall);
      res.status = Status::Unbounded;
      return res;
    }
  }
  const int m = static_cast<int>(keep.size());

  // Equilibrate: substitute x_i = y_i / s_i so every coefficient block has
  // unit max entry. Problems built from operators of very different norms
  // (e.g. Kraus products of a nearly noiseless channel) otherwise hand the
  // Schur system a condition number it cannot survive. The objective value
  // is invariant because the cost is divided by the same factors.
  for (int i = 0; i < m; ++i) {
    const double s = vscale[static_cast<size_t>(i)];
    for (AffineBlock& blk : blocks) blk.F[static_cast<size_t>(keep[static_cast<size_t>(i)])] /= s;
  }

  RVec c(m);
  for (int i = 0; i < m; ++i) {
    c(i) = prob.cost(keep[static_cast<size_t>(i)]) / vscale[static_cast<size_t>(i)];
  }
  const double cnorm = 1.0 + (m > 0 ? c.cwiseAbs().maxCoeff() : 0.0);

  auto expand = [&](const RVec& xr) {
    RVec full = RVec::Zero(nall);
    for (int i = 0; i < m; ++i) {
      full(keep[static_cast<size_t>(i)]) = xr(i) / vscale[static_cast<size_t>(i)];
    }
    return full;
  };

  std::vector<Block> work(nb);
  double total_dim = 0.0;
  for (size_t b = 0; b < nb; ++b) {
    work[b].f0_norm = blocks[b].F0.norm();
    total_dim += static_cast<double>(blocks[b].dim());
  }

  if (m == 0) {
    // Pure feasibility of the constants.
    double lmin = 0.0;
    for (size_t b = 0; b < nb; ++b) {
      Eigen::SelfAdjointEigenSolver<CMat> es(blocks[b].F0, Eigen::EigenvaluesOnly);
      lmin = std::min(lmin, es.eigenvalues().minCoeff());
    }
    Result res;
    res.x = RVec::Zero(nall);
    res.status = lmin >= -1e-9 ? Status::Optimal : Status::Infeasible;
    return res;
  }

  RVec x = RVec::Zero(m);
  RVec rd(m);
  RMat M(m, m);
  RVec q(m), dx(m);

  // Gram matrix of the coefficient blocks. The Schur system becomes
  // arbitrarily ill-conditioned as the duality gap closes, so raw Newton
  // directions pick up noise; projecting dZ back onto {A*(dZ) = rd} through
  // this fixed, well-conditioned system keeps dual feasibility exact.
  RMat gram(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      double acc = 0.0;
      for (size_t b = 0; b < nb; ++b) {
        acc += inner(blocks[b].F[static_cast<size_t>(keep[static_cast<size_t>(i)])],
                     blocks[b].F[static_cast<size_t>(keep[static_cast<size_t>(j)])]);
      }
      gram(i, j) = acc;
      gram(j, i) = acc;
    }
  }
  Eigen::LDLT<RMat> gram_fact(
      gram + 1e-12 * (1.0 + gram.diagonal().maxCoeff()) * RMat::Identity(m, m));

  auto assemble_fx = [&](size_t b) {
    CMat fx = blocks[b].F0;
    for (int i = 0; i < m; ++i) {
      fx += x(i) * blocks[b].F[static_cast<size_t>(keep[static_cast<size_t>(i)])];
    }
    return fx;
  };

  auto iterate_score = [&](const Result& r) {
    return std::max({r.pinf / opts.accept_feas, r.dinf / opts.accept_feas,
                     r.gap / opts.accept_gap});
  };

  // One full interior-point run from a fresh start whose initial slack and
  // dual radius are inflated by eta.
  auto run_attempt = [&](double eta) -> Result {
  Result res;
  res.x = RVec::Zero(nall);
  x.setZero();
  for (size_t b = 0; b < nb; ++b) {
    const Eigen::Index d = blocks[b].dim();
    work[b].S = eta * (1.0 + work[b].f0_norm) * CMat::Identity(d, d);
    work[b].Z = eta * cnorm * CMat::Identity(d, d);
  }

  Result best;
  double best_score = std::numeric_limits<double>::infinity();
  int stall = 0;
  int stagnant = 0;  // iterations since the violation score last improved
  for (int iter = 0; iter <= opts.max_iters; ++iter) {
    double gap_abs = 0.0;
    double pinf = 0.0;
    double pobj = c.dot(x);
    double dobj = 0.0;
    for (int i = 0; i < m; ++i) rd(i) = c(i);
    for (size_t b = 0; b < nb; ++b) {
      work[b].Rp = assemble_fx(b) - work[b].S;
      pinf = std::max(pinf, work[b].Rp.norm() / (1.0 + work[b].f0_norm + work[b].S.norm()));
      gap_abs += inner(work[b].S, work[b].Z);
      dobj -= inner(blocks[b].F0, work[b].Z);
      for (int i = 0; i < m; ++i) {
        rd(i) -= inner(blocks[b].F[static_cast<size_t>(keep[static_cast<size_t>(i)])], work[b].Z);
      }
    }
    const double dinf = rd.cwiseAbs().maxCoeff() / cnorm;
    const double relgap = gap_abs / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double mu = gap_abs / total_dim;

    res.value = pobj;
    res.dual_value = dobj;
    res.pinf = pinf;
    res.dinf = dinf;
    res.gap = relgap;
    res.iters = iter;

    if (iterate_score(res) < 0.97 * best_score) {
      stagnant = 0;
    } else {
      ++stagnant;
    }
    if (iterate_score(res) < best_score) {
      best_score = iterate_score(res);
      best = res;
      best.x = expand(x);
    }

    if (pinf <= opts.feas_tol && dinf <= opts.feas_tol && relgap <= opts.gap_tol) {
      res.status = Status::Optimal;
      res.x = expand(x);
      return res;
    }
    if (iter == opts.max_iters || stall >= 3 || stagnant >= 6) break;
    if (x.cwiseAbs().maxCoeff() > 1e14) {
      res.status = Status::Unbounded;
      res.x = expand(x);
      return res;
    }

    bool scaled = true;
    for (size_t b = 0; b < nb; ++b) {
      if (!nt_scaling(work[b])) { scaled = false; break; }
      work[b].G.assign(static_cast<size_t>(m), CMat());
      for (int i = 0; i < m; ++i) {
        const CMat& fi = blocks[b].F[static_cast<size_t>(keep[static_cast<size_t>(i)])];
        work[b].G[static_cast<size_t>(i)] = herm(work[b].Winv * fi * work[b].Winv);
      }
    }
    if (!scaled) break;

    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        double acc = 0.0;
        for (size_t b = 0; b < nb; ++b) {
          acc += inner(blocks[b].F[static_cast<size_t>(keep[static_cast<size_t>(i)])],
                       work[b].G[static_cast<size_t>(j)]);
        }
        M(i, j) = acc;
        M(j, i) = acc;
      }
    }

    // Jacobi-scale the Schur system: its diagonal spans many orders of
    // magnitude as the gap closes, and both the pivoting and the
    // regularization work far better on the equilibrated form.
    const double diag_floor = 1e-14 * (1.0 + M.diagonal().cwiseAbs().maxCoeff());
    const RVec dscale = M.diagonal().cwiseMax(diag_floor).cwiseSqrt().cwiseInverse();
    const RMat mhat = dscale.asDiagonal() * M * dscale.asDiagonal();
    Eigen::LDLT<RMat> fact;
    double reg = 1e-13;
    for (int attempt = 0; attempt < 6; ++attempt) {
      fact.compute(mhat + reg * RMat::Identity(m, m));
      if (fact.info() == Eigen::Success && fact.isPositive()) break;
      reg *= 100.0;
    }

    // Direction for a given complementarity target: from
    //   dS = sum_i dx_i F_i + Rp,  dZ = Winv (Rc - dS) Winv,
    //   sum_b <F_i, Z + dZ> = c_i
    // the reduced system is M dx = q.
    auto solve_direction = [&](const std::vector<CMat>& rc, std::vector<CMat>& ds,
                               std::vector<CMat>& dz) {
      for (int i = 0; i < m; ++i) {
        double acc = -rd(i);
        for (size_t b = 0; b < nb; ++b) {
          acc += inner(work[b].G[static_cast<size_t>(i)], rc[b] - work[b].Rp);
        }
        q(i) = acc;
      }
      dx = dscale.asDiagonal() * RVec(fact.solve(dscale.asDiagonal() * q));
      for (size_t b = 0; b < nb; ++b) {
        CMat s = work[b].Rp;
        for (int i = 0; i < m; ++i) {
          s += dx(i) * blocks[b].F[static_cast<size_t>(keep[static_cast<size_t>(i)])];
        }
        ds[b] = herm(s);
        dz[b] = herm(work[b].Winv * (rc[b] - ds[b]) * work[b].Winv);
      }
      // Remove the component of the Schur-solve error that violates the
      // dual equation A*(dZ) = rd.
      RVec defect(m);
      for (int i = 0; i < m; ++i) {
        double acc = -rd(i);
        for (size_t b = 0; b < nb; ++b) {
          acc += inner(blocks[b].F[static_cast<size_t>(keep[static_cast<size_t>(i)])], dz[b]);
        }
        defect(i) = acc;
      }
      const RVec y = gram_fact.solve(defect);
      for (size_t b = 0; b < nb; ++b) {
        CMat corr = CMat::Zero(blocks[b].dim(), blocks[b].dim());
        for (int i = 0; i < m; ++i) {
          corr += y(i) * blocks[b].F[static_cast<size_t>(keep[static_cast<size_t>(i)])];
        }
        dz[b] = herm(dz[b] - corr);
      }
    };

    std::vector<CMat> rc(nb), ds(nb), dz(nb);

    // Predictor: pure Newton step toward complementarity zero.
    for (size_t b = 0; b < nb; ++b) rc[b] = -work[b].S;
    solve_direction(rc, ds, dz);
    double ap = 1.0, ad = 1.0;
    for (size_t b = 0; b < nb; ++b) {
      ap = std::min(ap, max_step(work[b].S, ds[b]));
      ad = std::min(ad, max_step(work[b].Z, dz[b]));
    }
    double gap_aff = 0.0;
    for (size_t b = 0; b < nb; ++b) {
      gap_aff += inner(work[b].S + ap * ds[b], work[b].Z + ad * dz[b]);
    }
    gap_aff = std::max(gap_aff, 0.0);
    double sigma = gap_abs > 0.0 ? std::pow(std::min(1.0, gap_aff / gap_abs), 3) : 0.1;
    sigma = std::clamp(sigma, 1e-10, 0.9999);

    // Corrector: recenter toward sigma*mu on the same factorization.
    for (size_t b = 0; b < nb; ++b) rc[b] = sigma * mu * work[b].Zinv - work[b].S;
    solve_direction(rc, ds, dz);
    const double tau = mu < 1e-7 ? 0.995 : opts.step_frac;
    ap = 1.0;
    ad = 1.0;
    for (size_t b = 0; b < nb; ++b) {
      ap = std::min(ap, tau * max_step(work[b].S, ds[b]));
      ad = std::min(ad, tau * max_step(work[b].Z, dz[b]));
    }
    ap = std::min(ap, 1.0);
    ad = std::min(ad, 1.0);

    x += ap * dx;
    for (size_t b = 0; b < nb; ++b) {
      work[b].S = herm(work[b].S + ap * ds[b]);
      work[b].Z = herm(work[b].Z + ad * dz[b]);
    }
    stall = (ap < 1e-10 && ad < 1e-10) ? stall + 1 : 0;
  }

  res.x = expand(x);
  if (best_score < iterate_score(res)) {
    const int final_iter = res.iters;
    res = best;
    res.iters = final_iter;
  }
  if (res.pinf <= opts.accept_feas && res.dinf <= opts.accept_feas &&
      res.gap <= opts.accept_gap) {
    res.status = Status::NearOptimal;
  } else if (res.dinf <= 1e-6 && res.dual_value > 1e8 * (1.0 + std::abs(res.value))) {
    // Dual objective diverging while dual feasibility is retained: the primal
    // feasible set is (numerically) empty.
    res.status = Status::Infeasible;
  } else {
    res.status = res.iters >= opts.max_iters ? Status::MaxIters : Status::Stalled;
  }
  return res;
  };

  // An initial radius far below the optimum's scale strands the first
  // iterates outside the central-path neighbourhood and the run stalls;
  // problems whose solutions are many orders of magnitude away from unit
  // size (sharply filtered channels, near-noiseless Kraus sets) need a
  // larger start. Stalled attempts are cheap -- they bail out after a
  // handful of iterations -- so escalate the radius and retry, keeping the
  // most converged iterate in case every attempt falls short.
  Result overall;
  double overall_score = std::numeric_limits<double>::infinity();
  for (const double eta : {1.0, 32.0, 1024.0, 32768.0}) {
    Result res = run_attempt(eta);
    if (res.status != Status::Stalled && res.status != Status::MaxIters) return res;
    const double score = iterate_score(res);
    if (score < overall_score) {
      overall_score = score;
      overall = res;
    }
  }
  return overall;
}

}  // namespace qfib::sdp
