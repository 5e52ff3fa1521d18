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

#pragma once

#include <Eigen/Dense>

#include <complex>

namespace qfib {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

CMat pauli_x();
CMat pauli_y();
CMat pauli_z();

// Largest singular value. Throws std::invalid_argument on an empty matrix.
double op_norm(const CMat& m);

// Entrywise max of |m - m^dag|. Requires a square matrix.
double hermiticity_defect(const CMat& m);

bool is_hermitian(const CMat& m, double tol = 1e-12);

struct HermEig {
  RVec values;   // descending
  CMat vectors;  // matching columns, unitary
};

// Eigendecomposition of a Hermitian matrix. Inputs farther than tol
// (entrywise) from Hermitian are rejected; accepted inputs are symmetrized
// before factorization. Output order is deterministic: eigenvalues
// descending, each eigenvector scaled so its first nonvanishing component
// is real positive, degenerate pairs ordered lexicographically.
HermEig herm_eig(const CMat& m, double tol = 1e-12);

CMat kron(const CMat& a, const CMat& b);

}  // namespace qfib
