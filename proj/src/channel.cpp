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

#include "qfib/channel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qfib {

Channel make_channel(int dim, std::vector<CMat> kraus, std::vector<CMat> dkraus) {
  if (dim < 1) throw std::invalid_argument("make_channel: dim must be positive");
  if (kraus.empty()) throw std::invalid_argument("make_channel: empty Kraus list");
  if (kraus.size() != dkraus.size()) {
    throw std::invalid_argument("make_channel: kraus and dkraus lengths differ");
  }
  for (size_t k = 0; k < kraus.size(); ++k) {
    if (kraus[k].rows() != dim || kraus[k].cols() != dim ||
        dkraus[k].rows() != dim || dkraus[k].cols() != dim) {
      std::ostringstream os;
      os << "make_channel: operator " << k << " is not " << dim << "x" << dim;
      throw std::invalid_argument(os.str());
    }
  }
  CMat acc = CMat::Zero(dim, dim);
  for (const CMat& k : kraus) acc += k.adjoint() * k;
  const double dev = (acc - CMat::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (dev > 1e-9) {
    std::ostringstream os;
    os << "make_channel: sum K^dag K deviates from identity by " << dev;
    throw std::invalid_argument(os.str());
  }
  Channel ch;
  ch.dim = dim;
  ch.kraus = std::move(kraus);
  ch.dkraus = std::move(dkraus);
  return ch;
}

Channel build_model(const ModelSpec& spec) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
    throw std::invalid_argument("build_model: p must lie in [0, 1]");
  }
  const double sp = std::sqrt(spec.p);
  const double sq = std::sqrt(1.0 - spec.p);
  const CMat id = CMat::Identity(2, 2);

  CVec k0(2), k1(2), kp(2), km(2);
  k0 << 1, 0;
  k1 << 0, 1;
  kp = (k0 + k1) / std::sqrt(2.0);
  km = (k0 - k1) / std::sqrt(2.0);

  CMat a(2, 2), b(2, 2);
  switch (spec.model) {
    case Model::DephasingPerp:
      a = sp * id;
      b = sq * pauli_x();
      break;
    case Model::DephasingPar:
      a = sp * id;
      b = sq * pauli_z();
      break;
    case Model::DampingPerp:
      a = km * km.adjoint() + sp * (kp * kp.adjoint());
      b = sq * (km * kp.adjoint());
      break;
    case Model::DampingPar:
      a = k0 * k0.adjoint() + sp * (k1 * k1.adjoint());
      b = sq * (k0 * k1.adjoint());
      break;
  }

  CMat u(2, 2);
  u << std::exp(Complex(0, -spec.phi / 2)), 0, 0, std::exp(Complex(0, spec.phi / 2));
  const CMat gen = Complex(0, -0.5) * pauli_z();  // d/dphi of U_phi = gen * U_phi

  std::vector<CMat> kraus = {u * a, u * b};
  std::vector<CMat> dkraus = {gen * kraus[0], gen * kraus[1]};
  return make_channel(2, std::move(kraus), std::move(dkraus));
}

Channel apply_gauge(const Channel& ch, const GaugeMatrix& h) {
  const int r = ch.rank();
  if (h.rows() != r || h.cols() != r) {
    throw std::invalid_argument("apply_gauge: gauge matrix size differs from channel rank");
  }
  if (hermiticity_defect(h) > 1e-12) {
    throw std::invalid_argument("apply_gauge: gauge matrix not Hermitian within 1e-12");
  }
  Channel out = ch;
  for (int k = 0; k < r; ++k) {
    CMat shift = CMat::Zero(ch.dim, ch.dim);
    for (int j = 0; j < r; ++j) shift += h(k, j) * ch.kraus[static_cast<size_t>(j)];
    out.dkraus[static_cast<size_t>(k)] = ch.dkraus[static_cast<size_t>(k)] - Complex(0, 1) * shift;
  }
  return out;
}

CMat alpha_matrix(const Channel& ch) {
  CMat acc = CMat::Zero(ch.dim, ch.dim);
  for (const CMat& dk : ch.dkraus) acc += dk.adjoint() * dk;
  return acc;
}

CMat beta_matrix(const Channel& ch) {
  CMat acc = CMat::Zero(ch.dim, ch.dim);
  for (size_t k = 0; k < ch.kraus.size(); ++k) {
    acc += ch.dkraus[k].adjoint() * ch.kraus[k];
  }
  return acc;
}

CMat choi_matrix(const Channel& ch) {
  const int d2 = ch.dim * ch.dim;
  CMat acc = CMat::Zero(d2, d2);
  for (const CMat& k : ch.kraus) {
    CVec v = Eigen::Map<const CVec>(k.data(), d2);
    acc += v * v.adjoint();
  }
  return acc;
}

}  // namespace qfib
