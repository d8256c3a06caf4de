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

#ifndef TRAJ_SEMICONTINUOUS_HPP_
#define TRAJ_SEMICONTINUOUS_HPP_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "traj/dp_kernel.hpp"
#include "traj/error.hpp"
#include "traj/global_align.hpp"
#include "traj/scoring.hpp"
#include "traj/trajectory.hpp"

namespace traj {

// Target of a semi-continuous edge: the closest point on the segment from
// vertex `edge` to vertex `edge + 1` of the other polyline (degenerate for a
// single-point polyline), realized at parameter t.
struct SegmentTarget {
  std::int32_t edge = 0;  // 0-based start vertex of the segment
  double t = 0.0;
  Point point;
};

// Semi-continuous assignment: every edge targets the closest point on the
// segment preceding the cell's sample (the sample itself at the boundary).
// alpha_target/beta_target hold the 0-based index of that sample (kGap for
// gap points); this is the index structure that stays monotone.
struct ScResult {
  std::vector<std::optional<SegmentTarget>> alpha, beta;  // nullopt = gap
  std::vector<std::int32_t> alpha_target, beta_target;
  std::vector<Gap> gaps;
  double score = 0.0;
  double normalized = 0.0;
};

// Discrete local result plus realized segment targets; points outside the
// window ranges are unaligned rather than gap points.
struct ScLocalResult {
  std::vector<std::optional<SegmentTarget>> alpha, beta;
  std::vector<std::int32_t> alpha_target, beta_target;  // kUnaligned outside
  std::vector<Gap> gaps;  // charged gaps inside the window only
  double score = 0.0;
  double normalized = 0.0;
  std::pair<std::size_t, std::size_t> end_cell{0, 0};
  std::pair<std::size_t, std::size_t> start_cell{0, 0};
};

namespace detail {

// Realized closest point for an edge committed at cell index `cell` (0-based
// target sample index) on polyline `on`.
inline SegmentTarget sc_target(const Trajectory& on, std::size_t cell,
                               Point from) {
  if (cell == 0) {
    return SegmentTarget{0, 0.0, on[0]};
  }
  const auto proj = point_segment_dist(from, on[cell - 1], on[cell]);
  return SegmentTarget{static_cast<std::int32_t>(cell - 1), proj.t,
                       proj.closest};
}

}  // namespace detail

// Optimal semi-continuous assignment; identical DP to global_align with the
// per-direction segment distances. O(mn) time.
inline ScResult semicontinuous_align(const Trajectory& p, const Trajectory& q,
                                     const ScoringParams& params) {
  detail::require_nonempty(p, q);
  const std::size_t m = p.size(), n = q.size();
  std::vector<std::uint32_t> prov((m + 1) * (n + 1));
  const detail::SemiContinuousDelta delta{&p, &q, params.c, 0.0};
  ScResult res;
  res.score = detail::run_forward(
      m, n, params.a, params.delta, false, delta,
      [&](std::size_t i, std::size_t j, const detail::CellVals&,
          std::uint32_t pr) { prov[i * (n + 1) + j] = pr; });
  res.alpha.assign(m, std::nullopt);
  res.beta.assign(n, std::nullopt);
  res.alpha_target.assign(m, kGap);
  res.beta_target.assign(n, kGap);
  detail::walk_provenance(
      prov, n + 1, m, n,
      [&](std::size_t pi, std::size_t qj) {
        res.alpha[pi] = detail::sc_target(q, qj, p[pi]);
        res.alpha_target[pi] = static_cast<std::int32_t>(qj);
      },
      [&](std::size_t qj, std::size_t pi) {
        res.beta[qj] = detail::sc_target(p, pi, q[qj]);
        res.beta_target[qj] = static_cast<std::int32_t>(pi);
      });

  res.gaps = gaps_of(res.alpha_target, Side::kP);
  const auto q_gaps = gaps_of(res.beta_target, Side::kQ);
  res.gaps.insert(res.gaps.end(), q_gaps.begin(), q_gaps.end());
  res.normalized = normalize(res.score, m, n, params.c);
  return res;
}

// Score re-derived from the realized closest points and the gap structure;
// must reproduce ScResult::score.
inline double reevaluate_semicontinuous(const ScResult& res,
                                        const Trajectory& p,
                                        const Trajectory& q,
                                        const ScoringParams& params) {
  double score = 0.0;
  for (std::size_t i = 0; i < res.alpha.size(); ++i) {
    if (res.alpha[i]) score += delta_score(p[i], res.alpha[i]->point, params.c);
  }
  for (std::size_t j = 0; j < res.beta.size(); ++j) {
    if (res.beta[j]) score += delta_score(q[j], res.beta[j]->point, params.c);
  }
  for (const Gap& g : res.gaps) {
    score += params.a + params.delta * static_cast<double>(g.length);
  }
  return score;
}

// Local variant of the semi-continuous model; tau is required.
inline ScLocalResult local_align_semicontinuous(const Trajectory& p,
                                                const Trajectory& q,
                                                const ScoringParams& params) {
  detail::require_nonempty(p, q);
  if (!params.tau || *params.tau < 0.0) {
    throw ConfigError("local alignment requires tau >= 0");
  }
  const std::size_t m = p.size(), n = q.size();
  std::vector<std::uint32_t> prov((m + 1) * (n + 1));
  const detail::SemiContinuousDelta delta{&p, &q, params.c, *params.tau};
  detail::LocalMax max_cell;
  detail::run_forward(m, n, params.a, params.delta - *params.tau, true, delta,
                      [&](std::size_t i, std::size_t j,
                          const detail::CellVals& v, std::uint32_t pr) {
                        prov[i * (n + 1) + j] = pr;
                        max_cell.offer(i, j, v.best);
                      });

  ScLocalResult res;
  res.alpha.assign(m, std::nullopt);
  res.beta.assign(n, std::nullopt);
  res.alpha_target.assign(m, kUnaligned);
  res.beta_target.assign(n, kUnaligned);
  res.score = max_cell.value;
  res.normalized = normalize(res.score, m, n, params.c);
  res.end_cell = {max_cell.i, max_cell.j};
  res.start_cell = detail::walk_provenance(
      prov, n + 1, max_cell.i, max_cell.j,
      [&](std::size_t pi, std::size_t qj) {
        res.alpha[pi] = detail::sc_target(q, qj, p[pi]);
        res.alpha_target[pi] = static_cast<std::int32_t>(qj);
      },
      [&](std::size_t qj, std::size_t pi) {
        res.beta[qj] = detail::sc_target(p, pi, q[qj]);
        res.beta_target[qj] = static_cast<std::int32_t>(pi);
      });
  for (std::size_t i = res.start_cell.first; i < res.end_cell.first; ++i) {
    if (res.alpha_target[i] == kUnaligned) res.alpha_target[i] = kGap;
  }
  for (std::size_t j = res.start_cell.second; j < res.end_cell.second; ++j) {
    if (res.beta_target[j] == kUnaligned) res.beta_target[j] = kGap;
  }
  res.gaps = gaps_of(res.alpha_target, Side::kP);
  const auto q_gaps = gaps_of(res.beta_target, Side::kQ);
  res.gaps.insert(res.gaps.end(), q_gaps.begin(), q_gaps.end());
  return res;
}

}  // namespace traj

#endif  // TRAJ_SEMICONTINUOUS_HPP_
