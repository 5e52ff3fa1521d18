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

#include "qfib/matrix.hpp"

#include <vector>

namespace qfib {

// A quantum channel frozen at one parameter point: Kraus operators K_k and
// their parameter derivatives dK_k. Everything downstream depends on the
// channel only through this pair of lists.
struct Channel {
  int dim = 0;                 // Hilbert space dimension d
  std::vector<CMat> kraus;     // K_k, each d x d
  std::vector<CMat> dkraus;    // dK_k at the working point, each d x d
  int rank() const { return static_cast<int>(kraus.size()); }
};

// Validates shapes and trace preservation (sum K^dag K = I within 1e-9
// entrywise). Zero Kraus operators are kept as-is: the rank fixes the size
// of the gauge parameter space and is never auto-compressed.
Channel make_channel(int dim, std::vector<CMat> kraus, std::vector<CMat> dkraus);

enum class Model { DephasingPerp, DephasingPar, DampingPerp, DampingPar };

struct ModelSpec {
  Model model = Model::DephasingPerp;
  double p = 0.75;    // noise survival probability
  double phi = 0.0;   // working-point phase
};

// The four built-in single-qubit channels. Noise acts before the signal:
// K_{phi,k} = U_phi K_k with U_phi = exp(-i sigma_z phi/2), so the
// derivatives are dK_k = (-i sigma_z/2) U_phi K_k, computed analytically.
Channel build_model(const ModelSpec& spec);

// Hermitian r x r matrix mixing derivative operators among equivalent
// Kraus representations.
using GaugeMatrix = CMat;

// Moves to the equivalent representation selected by h:
// dK_k -> dK_k - i sum_j h_{kj} K_j. The kraus list (and hence the channel
// action) is returned untouched.
Channel apply_gauge(const Channel& ch, const GaugeMatrix& h);

CMat alpha_matrix(const Channel& ch);  // sum_k dK_k^dag dK_k (Hermitian PSD)
CMat beta_matrix(const Channel& ch);   // sum_k dK_k^dag K_k (i*beta Hermitian)

// Fingerprint of the channel action, built from the kraus list alone:
// sum_k vec(K_k) vec(K_k)^dag with column-major vec.
CMat choi_matrix(const Channel& ch);

}  // namespace qfib
