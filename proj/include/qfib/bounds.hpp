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

#include <array>
#include <string>
#include <vector>

#include "qfib/gauge.hpp"

namespace qfib {

enum class BoundKind {
  Parallel,      // parallel strategies, quadratic-in-n closed form
  AdaptiveOld,   // earlier adaptive closed form
  AdaptiveIter,  // adaptive bound by per-step minimization
  CSIter,        // causal-superposition bound, one representation per curve
  ClosedForm,    // adaptive closed form derived from the iterative bound
  Asymptotic,    // adaptive closed form with the log(n) correction
  ParallelDP,    // parallel bound tightened by mixing representations
};

inline constexpr std::array<BoundKind, 7> all_bound_kinds = {
    BoundKind::Parallel,    BoundKind::AdaptiveOld, BoundKind::AdaptiveIter,
    BoundKind::CSIter,      BoundKind::ClosedForm,  BoundKind::Asymptotic,
    BoundKind::ParallelDP};

// Stable token used in CLI flags and output files.
const char* kind_name(BoundKind k);
bool parse_kind(const std::string& token, BoundKind& out);

struct BoundSeries {
  BoundKind kind = BoundKind::Parallel;
  int nmax = 0;
  std::vector<double> values;  // values[n-1] bounds the n-use QFI
  std::vector<int> argmin;     // grid index chosen per n (or per step); may be empty
  bool applicable = true;      // false: kind undefined for this channel (values are NaN)
};

// Each function evaluates its family for n = 1..nmax from a precomputed
// g-table; no SDP is solved here.
BoundSeries bound_parallel(const GTable& gt, int nmax);
BoundSeries bound_ad_old(const GTable& gt, int nmax);
BoundSeries bound_closed_form(const GTable& gt, int nmax);
BoundSeries bound_asymptotic(const GTable& gt, int nmax);
BoundSeries bound_ad_iter(const GTable& gt, int nmax);
BoundSeries bound_cs_iter(const GTable& gt, int nmax);

// Dynamic program over the accumulated-‖β‖ state; accgrid controls the state
// resolution (0 picks 4·nmax). Never exceeds bound_parallel or bound_ad_iter.
BoundSeries bound_parallel_dp(const GTable& gt, int nmax, int accgrid = 0);

BoundSeries compute_bound(BoundKind kind, const GTable& gt, int nmax, int accgrid = 0);

}  // namespace qfib
