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

#include "qfib/channel.hpp"
#include "qfib/sdp.hpp"

namespace qfib {

// Requested b lies below l = min ‖β̃‖, so no gauge satisfies the constraint.
struct InfeasiblePoint : SolverError {
  using SolverError::SolverError;
};

// Sampled trade-off curve g(b) = min ‖α̃‖ s.t. ‖β̃‖ ≤ b on the arithmetic
// grid b[0] = l, ..., b[p-1] = r. Degenerate channels (l = r) produce a
// single-point table.
struct GTable {
  double l = 0.0;
  double r = 0.0;
  std::vector<double> b;
  std::vector<double> g;
  int size() const { return static_cast<int>(b.size()); }
};

struct GaugeOptions {
  int threads = 0;  // grid-solve worker count; 0 picks automatically
  sdp::Options sdp;
};

// Hermitian gauge matrices are packed as rank real diagonal entries followed
// by (Re, Im) pairs of the strictly upper triangle in row-major order.
int gauge_param_count(int rank);
GaugeMatrix gauge_from_params(const RVec& params, int rank);
RVec params_from_gauge(const GaugeMatrix& h);

// Schur-complement blocks. alpha_block_matrix(ch, λ, h) is PSD iff
// λ ≥ ‖α̃(h)‖; beta_block_matrix(ch, b, h) is PSD iff b ≥ ‖β̃(h)‖. Both are
// affine in (λ or b) and in the entries of h.
CMat alpha_block_matrix(const Channel& ch, double lambda, const GaugeMatrix& h);
CMat beta_block_matrix(const Channel& ch, double b, const GaugeMatrix& h);

// r = min over gauges of √‖α̃‖. 4r² is the single-use ancilla-assisted QFI.
double compute_r(const Channel& ch, const GaugeOptions& opts = {});

// l = min over gauges of ‖β̃‖; l = 0 characterizes SS channels.
double compute_l(const Channel& ch, const GaugeOptions& opts = {});

// g(b) for one b ≥ l. Throws InfeasiblePoint when b < l (beyond tolerance).
double g_of_b(const Channel& ch, double b, const GaugeOptions& opts = {});

// Full table on p grid points; grid solves may run on several threads, the
// result is deterministic. The returned table passes validate_table.
GTable g_table(const Channel& ch, int p, const GaugeOptions& opts = {});

// Independent derivative-free check of g(b): multi-start simplex search over
// the gauge parameters with the norm constraint enforced by exact penalty.
// Supported for channel rank ≤ 3.
double brute_force_g(const Channel& ch, double b);

// Throws SolverError when a table violates its structural invariants
// (ordering of endpoints, arithmetic progression, monotone g, g(r) = r²).
void validate_table(const GTable& gt);

}  // namespace qfib
