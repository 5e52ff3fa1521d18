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

#include "qfib/qfi.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qfib/channel.hpp"

namespace qfib {

namespace {

// Completely positive evolution of (rho, drho) through a fixed operator set
// whose members carry their own phase derivatives.
struct OpSet {
  std::vector<CMat> ops;
  std::vector<CMat> dops;
};

ParamState push_through(const OpSet& s, const CMat& rho0) {
  const Eigen::Index d = s.ops.front().rows();
  ParamState out;
  out.rho = CMat::Zero(d, d);
  out.drho = CMat::Zero(d, d);
  for (size_t i = 0; i < s.ops.size(); ++i) {
    out.rho += s.ops[i] * rho0 * s.ops[i].adjoint();
    const CMat cross = s.dops[i] * rho0 * s.ops[i].adjoint();
    out.drho += cross + cross.adjoint();
  }
  return out;
}

}  // namespace

double qfi_mixed(const ParamState& s) {
  const Eigen::Index d = s.rho.rows();
  if (d == 0 || s.rho.cols() != d || s.drho.rows() != d || s.drho.cols() != d) {
    throw std::invalid_argument("qfi_mixed: rho and drho must be square and equal size");
  }
  const double scale = 1.0 + s.drho.cwiseAbs().maxCoeff();
  if (std::abs(s.rho.trace().real() - 1.0) > 1e-10 || std::abs(s.rho.trace().imag()) > 1e-10) {
    throw std::invalid_argument("qfi_mixed: rho is not unit trace");
  }
  if (hermiticity_defect(s.drho) > 1e-10 * scale) {
    throw std::invalid_argument("qfi_mixed: drho is not Hermitian");
  }
  if (std::abs(s.drho.trace()) > 1e-10 * scale) {
    throw std::invalid_argument("qfi_mixed: drho is not traceless");
  }

  const HermEig eig = herm_eig(s.rho, 1e-10);
  if (eig.values.minCoeff() < -1e-10) {
    throw std::invalid_argument("qfi_mixed: rho is not positive semidefinite");
  }

  const CMat dd = eig.vectors.adjoint() * s.drho * eig.vectors;
  double f = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double denom = eig.values(i) + eig.values(j);
      if (denom > 1e-12) f += 2.0 * std::norm(dd(i, j)) / denom;
    }
  }
  return f;
}

double qfi_pure(const CVec& psi, const CVec& dpsi) {
  if (psi.size() == 0 || psi.size() != dpsi.size()) {
    throw std::invalid_argument("qfi_pure: vectors must be nonempty and equal length");
  }
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("qfi_pure: psi must be normalized");
  }
  const Complex overlap = psi.dot(dpsi);
  const double f = 4.0 * (dpsi.squaredNorm() - std::norm(overlap));
  return std::max(0.0, f);
}

double simulate_intro(double p, double phi, IntroStrategy strategy) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("simulate_intro: p must lie in [0, 1]");
  }
  const Channel ch = build_model({Model::DephasingPerp, p, phi});
  const CMat id2 = CMat::Identity(2, 2);
  const double isq2 = 1.0 / std::sqrt(2.0);

  switch (strategy) {
    case IntroStrategy::SequentialC: {
      CVec plus(2);
      plus << isq2, isq2;
      OpSet s;
      for (size_t ai = 0; ai < ch.kraus.size(); ++ai) {
        for (size_t bi = 0; bi < ch.kraus.size(); ++bi) {
          s.ops.push_back(ch.kraus[bi] * ch.kraus[ai]);
          s.dops.push_back(ch.dkraus[bi] * ch.kraus[ai] + ch.kraus[bi] * ch.dkraus[ai]);
        }
      }
      return qfi_mixed(push_through(s, plus * plus.adjoint()));
    }

    case IntroStrategy::ParallelE: {
      CVec bell(4);
      bell << isq2, 0, 0, isq2;
      OpSet s;
      for (size_t ai = 0; ai < ch.kraus.size(); ++ai) {
        for (size_t bi = 0; bi < ch.kraus.size(); ++bi) {
          s.ops.push_back(kron(ch.kraus[ai], ch.kraus[bi]));
          s.dops.push_back(kron(ch.dkraus[ai], ch.kraus[bi]) +
                           kron(ch.kraus[ai], ch.dkraus[bi]));
        }
      }
      return qfi_mixed(push_through(s, bell * bell.adjoint()));
    }

    case IntroStrategy::AdaptiveAD: {
      // Probe is the first tensor factor; the channel acts on it alone. The
      // recovery measures the parity of the two qubits: the even outcome is
      // kept, the odd outcome is repaired by flipping the ancilla (flipping
      // the probe instead would conjugate the accumulated phase). When the
      // flip branch of the channel is the likelier one, the mirrored recovery
      // -- pre-flip the probe on both outcomes, so the flip branch becomes
      // the reference evolution -- does better; take the best of the two.
      CVec bell(4);
      bell << isq2, 0, 0, isq2;
      CMat pc = CMat::Zero(4, 4), pe = CMat::Zero(4, 4);
      pc(0, 0) = pc(3, 3) = 1.0;
      pe(1, 1) = pe(2, 2) = 1.0;
      const CMat flip_probe = kron(pauli_x(), id2);
      const CMat fix_ancilla = kron(id2, pauli_x()) * pe;
      const std::array<std::array<CMat, 2>, 2> recoveries = {
          {{pc, fix_ancilla}, {flip_probe * pc, flip_probe * fix_ancilla}}};

      double best = 0.0;
      for (const auto& recovery : recoveries) {
        OpSet s;
        for (const CMat& rm : recovery) {
          for (size_t ai = 0; ai < ch.kraus.size(); ++ai) {
            for (size_t bi = 0; bi < ch.kraus.size(); ++bi) {
              const CMat first = kron(ch.kraus[ai], id2);
              const CMat dfirst = kron(ch.dkraus[ai], id2);
              const CMat second = kron(ch.kraus[bi], id2);
              const CMat dsecond = kron(ch.dkraus[bi], id2);
              s.ops.push_back(second * rm * first);
              s.dops.push_back(dsecond * rm * first + second * rm * dfirst);
            }
          }
        }
        best = std::max(best, qfi_mixed(push_through(s, bell * bell.adjoint())));
      }
      return best;
    }
  }
  throw std::invalid_argument("simulate_intro: unknown strategy");
}

}  // namespace qfib
