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

#ifndef TRAJ_LOCAL_ALIGN_HPP_
#define TRAJ_LOCAL_ALIGN_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "traj/dp_kernel.hpp"
#include "traj/error.hpp"
#include "traj/global_align.hpp"
#include "traj/scoring.hpp"
#include "traj/trajectory.hpp"

namespace traj {

// Most similar pair of contiguous sub-trajectories under tau-shifted
// scoring. Entries outside the matched window are kUnaligned and carry no
// score; kGap entries inside the window are charged gap points.
struct LocalResult {
  std::vector<std::int32_t> alpha, beta;
  std::vector<Gap> gaps;  // charged gaps inside the window only
  double score = 0.0;
  double normalized = 0.0;
  // Cells are prefix lengths: the window covers 0-based P indices
  // [start_cell.first, end_cell.first) and Q indices
  // [start_cell.second, end_cell.second). An empty window means score 0.
  std::pair<std::size_t, std::size_t> end_cell{0, 0};
  std::pair<std::size_t, std::size_t> start_cell{0, 0};
};

namespace detail {

template <class Delta>
LocalResult local_align_impl(const Trajectory& p, const Trajectory& q,
                             const ScoringParams& params, const Delta& delta) {
  require_nonempty(p, q);
  if (!params.tau) {
    throw ConfigError("local alignment requires tau");
  }
  if (*params.tau < 0.0) {
    throw ConfigError("local alignment requires tau >= 0");
  }
  const std::size_t m = p.size(), n = q.size();
  std::vector<std::uint32_t> prov((m + 1) * (n + 1));
  LocalMax max_cell;
  run_forward(m, n, params.a, params.delta - *params.tau, true, delta,
              [&](std::size_t i, std::size_t j, const CellVals& v,
                  std::uint32_t pr) {
                prov[i * (n + 1) + j] = pr;
                max_cell.offer(i, j, v.best);
              });

  LocalResult res;
  res.alpha.assign(m, kGap);
  res.beta.assign(n, kGap);
  res.score = max_cell.value;
  res.normalized = normalize(res.score, m, n, params.c);
  res.end_cell = {max_cell.i, max_cell.j};
  res.start_cell = walk_provenance(
      prov, n + 1, max_cell.i, max_cell.j,
      [&](std::size_t pi, std::size_t qj) {
        res.alpha[pi] = static_cast<std::int32_t>(qj);
      },
      [&](std::size_t qj, std::size_t pi) {
        res.beta[qj] = static_cast<std::int32_t>(pi);
      });

  for (std::size_t i = 0; i < m; ++i) {
    if (i < res.start_cell.first || i >= res.end_cell.first)
      res.alpha[i] = kUnaligned;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (j < res.start_cell.second || j >= res.end_cell.second)
      res.beta[j] = kUnaligned;
  }
  res.gaps = gaps_of(res.alpha, Side::kP);
  const auto q_gaps = gaps_of(res.beta, Side::kQ);
  res.gaps.insert(res.gaps.end(), q_gaps.begin(), q_gaps.end());
  return res;
}

}  // namespace detail

// Optimal local assignment of the discrete model; O(mn) time.
inline LocalResult local_align(const Trajectory& p, const Trajectory& q,
                               const ScoringParams& params) {
  const double tau = params.tau ? *params.tau : 0.0;
  const detail::DiscreteDelta delta{&p, &q, params.c, tau};
  return detail::local_align_impl(p, q, params, delta);
}

// Re-evaluates the reported window with the literal summation form; the
// result must reproduce LocalResult::score.
inline double reevaluate_local(const LocalResult& res, const Trajectory& p,
                               const Trajectory& q,
                               const ScoringParams& params) {
  const auto [i1, j1] = res.start_cell;
  const auto [i2, j2] = res.end_cell;
  Trajectory pw, qw;
  pw.points.assign(p.points.begin() + static_cast<std::ptrdiff_t>(i1),
                   p.points.begin() + static_cast<std::ptrdiff_t>(i2));
  qw.points.assign(q.points.begin() + static_cast<std::ptrdiff_t>(j1),
                   q.points.begin() + static_cast<std::ptrdiff_t>(j2));
  std::vector<std::int32_t> alpha, beta;
  for (std::size_t i = i1; i < i2; ++i) {
    const auto v = res.alpha[i];
    alpha.push_back(v >= 0 ? v - static_cast<std::int32_t>(j1) : v);
  }
  for (std::size_t j = j1; j < j2; ++j) {
    const auto v = res.beta[j];
    beta.push_back(v >= 0 ? v - static_cast<std::int32_t>(i1) : v);
  }
  return evaluate_score(pw, qw, alpha, beta, params);
}

}  // namespace traj

#endif  // TRAJ_LOCAL_ALIGN_HPP_
