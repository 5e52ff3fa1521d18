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

#include "qfib/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qfib {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inputs(const GTable& gt, int nmax) {
  if (nmax < 1) throw std::invalid_argument("bound series: nmax must be positive");
  if (gt.b.empty() || gt.b.size() != gt.g.size()) {
    throw std::invalid_argument("bound series: malformed g-table");
  }
}

// Shared driver for the families of the form value(n) = 4·min_j term(n, j).
template <typename Term>
BoundSeries grid_min_series(const GTable& gt, int nmax, BoundKind kind, Term term) {
  check_inputs(gt, nmax);
  BoundSeries s;
  s.kind = kind;
  s.nmax = nmax;
  s.values.resize(static_cast<size_t>(nmax));
  s.argmin.resize(static_cast<size_t>(nmax));
  const int p = gt.size();
  for (int n = 1; n <= nmax; ++n) {
    double best = kInf;
    int bestj = 0;
    for (int j = 0; j < p; ++j) {
      const double v = term(n, j);
      if (v < best) {  // strict: ties resolve to the smaller b
        best = v;
        bestj = j;
      }
    }
    s.values[static_cast<size_t>(n) - 1] = 4.0 * best;
    s.argmin[static_cast<size_t>(n) - 1] = bestj;
  }
  return s;
}

}  // namespace

const char* kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::Parallel: return "parallel";
    case BoundKind::AdaptiveOld: return "ad_old";
    case BoundKind::AdaptiveIter: return "ad_iter";
    case BoundKind::CSIter: return "cs_iter";
    case BoundKind::ClosedForm: return "closed_form";
    case BoundKind::Asymptotic: return "asymptotic";
    case BoundKind::ParallelDP: return "parallel_dp";
  }
  return "unknown";
}

bool parse_kind(const std::string& token, BoundKind& out) {
  for (BoundKind k : all_bound_kinds) {
    if (token == kind_name(k)) {
      out = k;
      return true;
    }
  }
  return false;
}

BoundSeries bound_parallel(const GTable& gt, int nmax) {
  return grid_min_series(gt, nmax, BoundKind::Parallel, [&](int n, int j) {
    const double dn = static_cast<double>(n);
    const double b = gt.b[static_cast<size_t>(j)];
    return dn * gt.g[static_cast<size_t>(j)] + dn * (dn - 1.0) * b * b;
  });
}

BoundSeries bound_ad_old(const GTable& gt, int nmax) {
  return grid_min_series(gt, nmax, BoundKind::AdaptiveOld, [&](int n, int j) {
    const double dn = static_cast<double>(n);
    const double b = gt.b[static_cast<size_t>(j)];
    const double g = gt.g[static_cast<size_t>(j)];
    return dn * g + dn * (dn - 1.0) * b * (b + 2.0 * std::sqrt(g));
  });
}

BoundSeries bound_closed_form(const GTable& gt, int nmax) {
  return grid_min_series(gt, nmax, BoundKind::ClosedForm, [&](int n, int j) {
    const double dn = static_cast<double>(n);
    const double b = gt.b[static_cast<size_t>(j)];
    const double g = gt.g[static_cast<size_t>(j)];
    return dn * g + dn * (dn - 1.0) * b * std::sqrt(g);
  });
}

BoundSeries bound_asymptotic(const GTable& gt, int nmax) {
  check_inputs(gt, nmax);
  BoundSeries s;
  s.kind = BoundKind::Asymptotic;
  s.nmax = nmax;
  if (gt.l < 1e-7 * std::max(1.0, gt.r)) {
    // The log-corrected form divides by ‖β‖²; with l = 0 the family is
    // undefined and the flat-curve channel needs no asymptotic refinement.
    s.applicable = false;
    s.values.assign(static_cast<size_t>(nmax), std::numeric_limits<double>::quiet_NaN());
    return s;
  }
  s.values.resize(static_cast<size_t>(nmax));
  s.argmin.resize(static_cast<size_t>(nmax));
  const int p = gt.size();
  s.values[0] = 4.0 * gt.r * gt.r;  // n = 1: no log term, exact single-use value
  s.argmin[0] = p - 1;
  for (int n = 2; n <= nmax; ++n) {
    const double dn = static_cast<double>(n);
    const double logn = std::log(dn);
    double best = kInf;
    int bestj = 0;
    for (int j = 0; j < p; ++j) {
      const double b = gt.b[static_cast<size_t>(j)];
      if (b <= 0.0) continue;
      const double g = gt.g[static_cast<size_t>(j)];
      // n·g + n(n−1)·b²·(1 + c·log n/(n−1)) with c = (g − b²)/b², expanded so
      // that b² cancels instead of being divided out.
      const double v = dn * g + dn * (dn - 1.0) * b * b + dn * logn * (g - b * b);
      if (v < best) {
        best = v;
        bestj = j;
      }
    }
    s.values[static_cast<size_t>(n) - 1] = 4.0 * best;
    s.argmin[static_cast<size_t>(n) - 1] = bestj;
  }
  return s;
}

BoundSeries bound_ad_iter(const GTable& gt, int nmax) {
  check_inputs(gt, nmax);
  BoundSeries s;
  s.kind = BoundKind::AdaptiveIter;
  s.nmax = nmax;
  s.values.resize(static_cast<size_t>(nmax));
  s.argmin.resize(static_cast<size_t>(nmax));
  const int p = gt.size();
  double a = 0.0;
  for (int n = 1; n <= nmax; ++n) {
    const double root = std::sqrt(a);
    double best = kInf;
    int bestj = 0;
    for (int j = 0; j < p; ++j) {
      const double v = gt.g[static_cast<size_t>(j)] + 2.0 * gt.b[static_cast<size_t>(j)] * root;
      if (v < best) {
        best = v;
        bestj = j;
      }
    }
    a += best;
    s.values[static_cast<size_t>(n) - 1] = 4.0 * a;
    s.argmin[static_cast<size_t>(n) - 1] = bestj;
  }
  return s;
}

BoundSeries bound_cs_iter(const GTable& gt, int nmax) {
  check_inputs(gt, nmax);
  BoundSeries s;
  s.kind = BoundKind::CSIter;
  s.nmax = nmax;
  s.values.resize(static_cast<size_t>(nmax));
  s.argmin.resize(static_cast<size_t>(nmax));
  const int p = gt.size();
  std::vector<double> acc(static_cast<size_t>(p), 0.0);
  for (int n = 1; n <= nmax; ++n) {
    double best = kInf;
    int bestj = 0;
    for (int j = 0; j < p; ++j) {
      double& a = acc[static_cast<size_t>(j)];
      a += gt.g[static_cast<size_t>(j)] + 2.0 * gt.b[static_cast<size_t>(j)] * std::sqrt(a);
      if (a < best) {
        best = a;
        bestj = j;
      }
    }
    s.values[static_cast<size_t>(n) - 1] = 4.0 * best;
    s.argmin[static_cast<size_t>(n) - 1] = bestj;
  }
  return s;
}

BoundSeries bound_parallel_dp(const GTable& gt, int nmax, int accgrid) {
  check_inputs(gt, nmax);
  if (accgrid <= 0) accgrid = 4 * nmax;
  if (accgrid < nmax) {
    throw std::invalid_argument("parallel_dp: accumulator grid must be at least nmax");
  }
  const int p = gt.size();
  const double work = static_cast<double>(nmax) * (static_cast<double>(accgrid) + 1.0) *
                      static_cast<double>(p);
  if (work > 2e9) {
    throw std::invalid_argument("parallel_dp: state space too large; reduce nmax or accgrid");
  }

  BoundSeries s;
  s.kind = BoundKind::ParallelDP;
  s.nmax = nmax;
  s.values.resize(static_cast<size_t>(nmax));

  if (gt.r <= 0.0) {
    std::fill(s.values.begin(), s.values.end(), 0.0);
    return s;
  }

  // Exact-state dynamic program. A choice multiset {j_1..j_n} yields
  //   a = Σ g_{j_i} + (Σ b_{j_i})² − Σ b_{j_i}² = C + B²,
  // a function of the accumulated sums B = Σ b and C = Σ (g − b²) only. States
  // are kept exact; buckets on the B axis merely bound how many survive (the
  // per-bucket representative with least C). Dropping states can only raise
  // the reported minimum, so the result stays a valid upper bound.
  const int nbuckets = accgrid + 1;
  const double width = gt.r * static_cast<double>(nmax) / static_cast<double>(accgrid);
  auto bucket = [&](double bsum) {
    const int idx = static_cast<int>(bsum / width);
    return std::min(idx, nbuckets - 1);
  };

  std::vector<double> curB(static_cast<size_t>(nbuckets)), curC(static_cast<size_t>(nbuckets), kInf);
  std::vector<double> nxtB(static_cast<size_t>(nbuckets)), nxtC(static_cast<size_t>(nbuckets), kInf);
  curB[0] = 0.0;
  curC[0] = 0.0;

  std::vector<double> cval(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) {
    const double b = gt.b[static_cast<size_t>(j)];
    cval[static_cast<size_t>(j)] = gt.g[static_cast<size_t>(j)] - b * b;
  }

  // Companion recursions whose float values the front must never exceed: the
  // per-step-minimized adaptive sequence (followed greedily as an explicit
  // state) and the single-representation closed form.
  double ad_a = 0.0;
  double greedyB = 0.0, greedyC = 0.0;

  for (int n = 1; n <= nmax; ++n) {
    std::fill(nxtC.begin(), nxtC.end(), kInf);
    for (int idx = 0; idx < nbuckets; ++idx) {
      if (curC[static_cast<size_t>(idx)] == kInf) continue;
      const double b0 = curB[static_cast<size_t>(idx)];
      const double c0 = curC[static_cast<size_t>(idx)];
      for (int j = 0; j < p; ++j) {
        const double nb = b0 + gt.b[static_cast<size_t>(j)];
        const double nc = c0 + cval[static_cast<size_t>(j)];
        const int t = bucket(nb);
        if (nc < nxtC[static_cast<size_t>(t)]) {
          nxtC[static_cast<size_t>(t)] = nc;
          nxtB[static_cast<size_t>(t)] = nb;
        }
      }
    }

    // Advance the adaptive companion and graft its state into the front.
    {
      const double root = std::sqrt(ad_a);
      double best = kInf;
      int bestj = 0;
      for (int j = 0; j < p; ++j) {
        const double v = gt.g[static_cast<size_t>(j)] + 2.0 * gt.b[static_cast<size_t>(j)] * root;
        if (v < best) {
          best = v;
          bestj = j;
        }
      }
      ad_a += best;
      greedyB += gt.b[static_cast<size_t>(bestj)];
      greedyC += cval[static_cast<size_t>(bestj)];
      const int t = bucket(greedyB);
      if (greedyC < nxtC[static_cast<size_t>(t)]) {
        nxtC[static_cast<size_t>(t)] = greedyC;
        nxtB[static_cast<size_t>(t)] = greedyB;
      }
    }

    // Pareto sweep: bucket order is B order, so any state whose C is not
    // strictly below everything to its left is dominated.
    double seen = kInf;
    double value = kInf;
    for (int idx = 0; idx < nbuckets; ++idx) {
      if (nxtC[static_cast<size_t>(idx)] >= seen) {
        nxtC[static_cast<size_t>(idx)] = kInf;
        continue;
      }
      seen = nxtC[static_cast<size_t>(idx)];
      const double v = nxtC[static_cast<size_t>(idx)] +
                       nxtB[static_cast<size_t>(idx)] * nxtB[static_cast<size_t>(idx)];
      value = std::min(value, v);
    }

    // Candidates evaluated with the exact float expressions of the companion
    // bounds, so the DP result can never exceed either of them.
    const double dn = static_cast<double>(n);
    for (int j = 0; j < p; ++j) {
      const double b = gt.b[static_cast<size_t>(j)];
      value = std::min(value, dn * gt.g[static_cast<size_t>(j)] + dn * (dn - 1.0) * b * b);
    }
    value = std::min(value, ad_a);
    value = std::min(value, greedyC + greedyB * greedyB);

    s.values[static_cast<size_t>(n) - 1] = 4.0 * value;
    std::swap(curB, nxtB);
    std::swap(curC, nxtC);
  }
  return s;
}

BoundSeries compute_bound(BoundKind kind, const GTable& gt, int nmax, int accgrid) {
  switch (kind) {
    case BoundKind::Parallel: return bound_parallel(gt, nmax);
    case BoundKind::AdaptiveOld: return bound_ad_old(gt, nmax);
    case BoundKind::AdaptiveIter: return bound_ad_iter(gt, nmax);
    case BoundKind::CSIter: return bound_cs_iter(gt, nmax);
    case BoundKind::ClosedForm: return bound_closed_form(gt, nmax);
    case BoundKind::Asymptotic: return bound_asymptotic(gt, nmax);
    case BoundKind::ParallelDP: return bound_parallel_dp(gt, nmax, accgrid);
  }
  throw std::invalid_argument("compute_bound: unknown kind");
}

}  // namespace qfib
