// Copyright 2026 The trajassign Authors
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

#ifndef TRAJ_GLOBAL_ALIGN_HPP_
#define TRAJ_GLOBAL_ALIGN_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "traj/dp_kernel.hpp"
#include "traj/error.hpp"
#include "traj/scoring.hpp"
#include "traj/trajectory.hpp"

namespace traj {

// Row-major (m+1) x (n+1) grid of one score function.
struct DpGrid {
  std::size_t cols = 0;
  std::vector<double> v;

  double at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
};

// The DP tables of the global alignment: per-cell values of the eight score
// functions plus the packed backtracking provenance. compute_tables fills
// everything; global_align itself only materializes the provenance.
struct DpTables {
  std::size_t m = 0, n = 0;
  double score = 0.0;
  std::vector<std::uint32_t> prov;  // (m+1) * (n+1), packed winners
  bool has_values = false;
  DpGrid best, gap_p, gap_q, gap_pq, free_p, free_q, phi_p_gap_q, gap_p_phi_q;
};

namespace detail {

inline void require_nonempty(const Trajectory& p, const Trajectory& q) {
  if (p.size() == 0 || q.size() == 0) {
    throw ConfigError("alignment requires non-empty trajectories");
  }
}

inline AssignmentResult finish_result(const Trajectory& p, const Trajectory& q,
                                      std::vector<std::int32_t> alpha,
                                      std::vector<std::int32_t> beta,
                                      double score, double c) {
  AssignmentResult res;
  res.alpha = std::move(alpha);
  res.beta = std::move(beta);
  res.gaps = gaps_of(res.alpha, Side::kP);
  const auto q_gaps = gaps_of(res.beta, Side::kQ);
  res.gaps.insert(res.gaps.end(), q_gaps.begin(), q_gaps.end());
  res.score = score;
  res.normalized = normalize(score, p.size(), q.size(), c);
  return res;
}

}  // namespace detail

// Full forward pass keeping all eight tables; O(mn) memory. Intended for
// inspection and tests; global_align is the lean path.
inline DpTables compute_tables(const Trajectory& p, const Trajectory& q,
                               const ScoringParams& params) {
  detail::require_nonempty(p, q);
  const std::size_t m = p.size(), n = q.size();
  DpTables t;
  t.m = m;
  t.n = n;
  t.prov.resize((m + 1) * (n + 1));
  t.has_values = true;
  const std::size_t cells = (m + 1) * (n + 1);
  for (DpGrid* g : {&t.best, &t.gap_p, &t.gap_q, &t.gap_pq, &t.free_p,
                    &t.free_q, &t.phi_p_gap_q, &t.gap_p_phi_q}) {
    g->cols = n + 1;
    g->v.resize(cells);
  }
  const detail::DiscreteDelta delta{&p, &q, params.c, 0.0};
  t.score = detail::run_forward(
      m, n, params.a, params.delta, false, delta,
      [&](std::size_t i, std::size_t j, const detail::CellVals& v,
          std::uint32_t pr) {
        const std::size_t k = i * (n + 1) + j;
        t.prov[k] = pr;
        t.best.v[k] = v.best;
        t.gap_p.v[k] = v.gap_p;
        t.gap_q.v[k] = v.gap_q;
        t.gap_pq.v[k] = v.gap_pq;
        t.free_p.v[k] = v.free_p;
        t.free_q.v[k] = v.free_q;
        t.phi_p_gap_q.v[k] = v.phi_p_gap_q;
        t.gap_p_phi_q.v[k] = v.gap_p_phi_q;
      });
  return t;
}

// One optimal (alpha, beta) recovered from tables produced by the forward
// pass of global_align or compute_tables.
inline std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>>
backtrack(const DpTables& tables, const Trajectory& p, const Trajectory& q) {
  if (tables.prov.size() != (tables.m + 1) * (tables.n + 1) ||
      tables.m != p.size() || tables.n != q.size()) {
    throw ConfigError("backtrack: provenance missing or table shape mismatch");
  }
  std::vector<std::int32_t> alpha(tables.m, kGap), beta(tables.n, kGap);
  detail::walk_provenance(
      tables.prov, tables.n + 1, tables.m, tables.n,
      [&](std::size_t pi, std::size_t qj) {
        alpha[pi] = static_cast<std::int32_t>(qj);
      },
      [&](std::size_t qj, std::size_t pi) {
        beta[qj] = static_cast<std::int32_t>(pi);
      });
  return {std::move(alpha), std::move(beta)};
}

// Optimal global assignment: the maximum of the scoring function over all
// monotone assignments, plus one assignment attaining it. O(mn) time.
inline AssignmentResult global_align(const Trajectory& p, const Trajectory& q,
                                     const ScoringParams& params) {
  detail::require_nonempty(p, q);
  const std::size_t m = p.size(), n = q.size();
  DpTables t;
  t.m = m;
  t.n = n;
  t.prov.resize((m + 1) * (n + 1));
  const detail::DiscreteDelta delta{&p, &q, params.c, 0.0};
  t.score = detail::run_forward(
      m, n, params.a, params.delta, false, delta,
      [&](std::size_t i, std::size_t j, const detail::CellVals&,
          std::uint32_t pr) { t.prov[i * (n + 1) + j] = pr; });
  auto [alpha, beta] = backtrack(t, p, q);
  return detail::finish_result(p, q, std::move(alpha), std::move(beta),
                               t.score, params.c);
}

// Score only, in O(m+n) working memory; arithmetic is identical to
// global_align cell for cell, so the result matches it exactly.
inline double global_score_linear_space(const Trajectory& p,
                                        const Trajectory& q,
                                        const ScoringParams& params) {
  detail::require_nonempty(p, q);
  const detail::DiscreteDelta delta{&p, &q, params.c, 0.0};
  return detail::run_forward(p.size(), q.size(), params.a, params.delta, false,
                             delta,
                             [](std::size_t, std::size_t,
                                const detail::CellVals&, std::uint32_t) {});
}

}  // namespace traj

#endif  // TRAJ_GLOBAL_ALIGN_HPP_
