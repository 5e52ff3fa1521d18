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

namespace qfib {

// A density matrix and its derivative with respect to the estimated phase,
// both evaluated at the working point.
struct ParamState {
  CMat rho;
  CMat drho;
};

// Exact quantum Fisher information via the symmetric logarithmic derivative,
// with matrix elements between kernel eigenvectors of rho dropped.
double qfi_mixed(const ParamState& s);

// Pure-state QFI 4(⟨dψ|dψ⟩ − |⟨ψ|dψ⟩|²); psi must be normalized.
double qfi_pure(const CVec& psi, const CVec& dpsi);

// Reference two-use protocols on the bit-flip dephasing channel:
//   SequentialC  one probe through the channel twice, |+⟩ input;
//   ParallelE    two channel copies on a maximally entangled pair;
//   AdaptiveAD   probe + ancilla with a mid-circuit error-correction step
//                (better of the probe- and ancilla-side corrections).
enum class IntroStrategy { SequentialC, ParallelE, AdaptiveAD };

double simulate_intro(double p, double phi, IntroStrategy strategy);

}  // namespace qfib
