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

#include "qfib/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qfib {

NMResult nelder_mead(const std::function<double(const RVec&)>& f, const RVec& x0,
                     double init_step, int max_evals, double ftol) {
  const int n = static_cast<int>(x0.size());
  if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");

  NMResult res;
  std::vector<RVec> pts(static_cast<size_t>(n) + 1, x0);
  std::vector<double> vals(static_cast<size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) pts[static_cast<size_t>(i)](i - 1) += init_step;
  for (int i = 0; i <= n; ++i) {
    vals[static_cast<size_t>(i)] = f(pts[static_cast<size_t>(i)]);
    ++res.evals;
  }

  std::vector<int> order(static_cast<size_t>(n) + 1);
  while (res.evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return vals[static_cast<size_t>(a)] < vals[static_cast<size_t>(b)];
    });
    const int best = order.front();
    const int worst = order.back();
    const int second = order[static_cast<size_t>(n) - 1];
    if (vals[static_cast<size_t>(worst)] - vals[static_cast<size_t>(best)] < ftol) break;

    RVec centroid = RVec::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (order[static_cast<size_t>(i)] != worst) centroid += pts[static_cast<size_t>(order[static_cast<size_t>(i)])];
    }
    centroid /= static_cast<double>(n);

    const RVec refl = centroid + (centroid - pts[static_cast<size_t>(worst)]);
    const double frefl = f(refl);
    ++res.evals;

    if (frefl < vals[static_cast<size_t>(best)]) {
      const RVec expa = centroid + 2.0 * (centroid - pts[static_cast<size_t>(worst)]);
      const double fexpa = f(expa);
      ++res.evals;
      if (fexpa < frefl) {
        pts[static_cast<size_t>(worst)] = expa;
        vals[static_cast<size_t>(worst)] = fexpa;
      } else {
        pts[static_cast<size_t>(worst)] = refl;
        vals[static_cast<size_t>(worst)] = frefl;
      }
    } else if (frefl < vals[static_cast<size_t>(second)]) {
      pts[static_cast<size_t>(worst)] = refl;
      vals[static_cast<size_t>(worst)] = frefl;
    } else {
      const bool outside = frefl < vals[static_cast<size_t>(worst)];
      const RVec& anchor = outside ? refl : pts[static_cast<size_t>(worst)];
      const RVec contr = centroid + 0.5 * (anchor - centroid);
      const double fcontr = f(contr);
      ++res.evals;
      if (fcontr < std::min(frefl, vals[static_cast<size_t>(worst)])) {
        pts[static_cast<size_t>(worst)] = contr;
        vals[static_cast<size_t>(worst)] = fcontr;
      } else {
        // Shrink every vertex toward the best one.
        for (int i = 0; i <= n; ++i) {
          const int idx = order[static_cast<size_t>(i)];
          if (idx == best) continue;
          pts[static_cast<size_t>(idx)] =
              pts[static_cast<size_t>(best)] + 0.5 * (pts[static_cast<size_t>(idx)] - pts[static_cast<size_t>(best)]);
          vals[static_cast<size_t>(idx)] = f(pts[static_cast<size_t>(idx)]);
          ++res.evals;
        }
      }
    }
  }

  size_t best = 0;
  for (size_t i = 1; i < vals.size(); ++i) {
    if (vals[i] < vals[best]) best = i;
  }
  res.x = pts[best];
  res.value = vals[best];
  return res;
}

}  // namespace qfib
