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

#include <functional>

#include "qfib/matrix.hpp"

namespace qfib {

struct NMResult {
  RVec x;
  double value = 0.0;
  int evals = 0;
};

// Nelder-Mead downhill simplex minimization of f from x0. The initial simplex
// perturbs each coordinate by init_step. Terminates when the simplex value
// spread drops below ftol or the evaluation budget is exhausted.
NMResult nelder_mead(const std::function<double(const RVec&)>& f, const RVec& x0,
                     double init_step, int max_evals, double ftol);

}  // namespace qfib
