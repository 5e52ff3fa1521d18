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

#include <vector>

#include "qfib/sdp.hpp"

namespace qfib {

// Markovian master-equation model frozen at one parameter point: the
// Hamiltonian, the collapse operators, and their parameter derivatives.
struct LindbladModel {
  int dim = 0;
  CMat H;
  CMat dH;
  std::vector<CMat> collapse;
  std::vector<CMat> dcollapse;
  int jumps() const { return static_cast<int>(collapse.size()); }
};

// Validates shapes and Hermiticity of H and dH (within 1e-12).
LindbladModel make_lindblad(int dim, CMat h, CMat dh, std::vector<CMat> collapse,
                            std::vector<CMat> dcollapse);

// Representation freedom that survives the continuous-time limit: a real
// scalar, a complex J-vector, and a Hermitian J×J matrix.
struct ContinuousGauge {
  double h00 = 0.0;
  CVec hvec;
  CMat hmat;
};

ContinuousGauge zero_gauge(int jumps);

// Number of real scalars parameterizing a gauge: 1 + 2J + J².
int continuous_gauge_param_count(int jumps);
ContinuousGauge continuous_gauge_from_params(const RVec& params, int jumps);

// First-order generator pair of the short-time Kraus expansion. i·beta1 is
// Hermitian for every gauge; alpha1 is Hermitian PSD (a Gram accumulation of
// the per-jump combinations M_j = h_j·I + Σ_k hmat_{jk} L_k + i·dL_j).
CMat beta1(const LindbladModel& m, const ContinuousGauge& g);
CMat alpha1(const LindbladModel& m, const ContinuousGauge& g);

// Instantaneous growth-rate bound: dF/dt ≤ rate_bound(m, F) with
// rate_bound = 4·min over gauges of (‖alpha1‖ + ‖beta1‖·√F).
double rate_bound(const LindbladModel& m, double F, const sdp::Options& opts = {});

// Integrates the rate bound from F(0) = 0 to time T. The returned curve is a
// certified upper envelope: each step takes the largest root of the implicit
// (right-endpoint) Euler update, and the step size is halved until the value
// at T is stable to 0.5%. Entries are equally spaced on [0, T].
std::vector<double> integrate_bound(const LindbladModel& m, double T, int steps,
                                    const sdp::Options& opts = {});

// Long-time behavior class: when the Hamiltonian derivative can be absorbed
// into the noise (beta1 = 0 reachable), F grows at most linearly with slope
// `coefficient`; otherwise quadratically, F ≤ coefficient·t².
struct SpanResult {
  bool in_span = false;
  double coefficient = 0.0;
};

SpanResult classify_span(const LindbladModel& m, const sdp::Options& opts = {});

}  // namespace qfib
