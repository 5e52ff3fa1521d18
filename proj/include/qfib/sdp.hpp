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

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfib {

// Thrown when a conic solve does not reach the requested accuracy, or when a
// solved table violates its invariants. The message carries the residual
// diagnostics of the failing solve.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace sdp {

// One PSD constraint F0 + sum_i x_i F[i] >= 0 with Hermitian coefficient
// matrices over real decision variables x.
struct AffineBlock {
  CMat F0;
  std::vector<CMat> F;  // one coefficient matrix per variable (may be zero)
  Eigen::Index dim() const { return F0.rows(); }
};

// minimize cost . x  subject to every block being PSD.
struct Problem {
  RVec cost;
  std::vector<AffineBlock> blocks;
  int nvars() const { return static_cast<int>(cost.size()); }
};

struct Options {
  double feas_tol = 1e-9;     // target primal/dual feasibility
  double gap_tol = 1e-9;      // target relative duality gap
  double accept_feas = 1e-8;  // still reported as converged at exit
  double accept_gap = 2e-7;   // keeps the value error well under 1e-6
  int max_iters = 200;
  double step_frac = 0.98;    // fraction of the step to the cone boundary
};

enum class Status { Optimal, NearOptimal, MaxIters, Stalled, Infeasible, Unbounded };

struct Result {
  RVec x;
  double value = 0.0;       // cost . x
  double dual_value = 0.0;
  double pinf = 0.0;        // primal feasibility residual (relative)
  double dinf = 0.0;        // dual feasibility residual (relative)
  double gap = 0.0;         // relative duality gap
  int iters = 0;
  Status status = Status::Stalled;
  bool ok() const { return status == Status::Optimal || status == Status::NearOptimal; }
  std::string diagnostics() const;
};

// Primal-dual interior-point solve with Nesterov-Todd scaling, working
// directly on the complex Hermitian blocks. Deterministic; no shared state.
Result solve(const Problem& prob, const Options& opts = {});

// Extracts the coefficient matrices of a map that is exactly affine in its
// real arguments by sampling it at zero and at the unit vectors.
AffineBlock block_from_affine(int nvars, const std::function<CMat(const RVec&)>& eval);

}  // namespace sdp
}  // namespace qfib
