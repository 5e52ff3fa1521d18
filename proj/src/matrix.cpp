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

#include "qfib/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qfib {

CMat pauli_x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMat pauli_y() {
  CMat m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

CMat pauli_z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

double op_norm(const CMat& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw std::invalid_argument("op_norm: empty matrix");
  }
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

double hermiticity_defect(const CMat& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermiticity_defect: matrix is not square");
  }
  if (m.rows() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.rows() == 0) return true;
  return hermiticity_defect(m) <= tol;
}

namespace {

// Lexicographic order on complex vectors, component-wise (Re, Im).
bool lex_less(const CVec& a, const CVec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

void fix_phase(Eigen::Ref<CVec> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > 1e-12) {
      v *= std::conj(v(i)) / a;
      return;
    }
  }
}

}  // namespace

HermEig herm_eig(const CMat& m, double tol) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument("herm_eig: matrix must be square and nonempty");
  }
  if (hermiticity_defect(m) > tol) {
    throw std::invalid_argument("herm_eig: input not Hermitian within tolerance");
  }
  const CMat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("herm_eig: eigensolver did not converge");
  }

  const Eigen::Index n = h.rows();
  CMat vecs = es.eigenvectors();
  RVec vals = es.eigenvalues();
  for (Eigen::Index c = 0; c < n; ++c) fix_phase(vecs.col(c));

  // Descending eigenvalues; near-degenerate pairs ordered by eigenvector.
  std::vector<Eigen::Index> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  const double tie = 1e-12 * (1.0 + vals.cwiseAbs().maxCoeff());
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(vals(a) - vals(b)) > tie) return vals(a) > vals(b);
    return lex_less(vecs.col(a), vecs.col(b));
  });

  HermEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    out.values(c) = vals(idx[static_cast<size_t>(c)]);
    out.vectors.col(c) = vecs.col(idx[static_cast<size_t>(c)]);
  }
  return out;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace qfib
