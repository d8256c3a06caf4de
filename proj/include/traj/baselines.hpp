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

#ifndef TRAJ_BASELINES_HPP_
#define TRAJ_BASELINES_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "traj/error.hpp"
#include "traj/scoring.hpp"
#include "traj/trajectory.hpp"

namespace traj {

// A set of non-crossing index correspondences. total_cost is a length sum
// for dtw and dtw_pruned, and a score for seq_align.
struct CorrespondenceSet {
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  double total_cost = 0.0;
};

// Classic dynamic time warping: the monotone covering path minimizing the
// total Euclidean edge length. Backtracking prefers diagonal, then up, then
// left on ties.
inline CorrespondenceSet dtw(const Trajectory& p, const Trajectory& q) {
  const std::size_t m = p.size(), n = q.size();
  if (m == 0 || n == 0) {
    throw ConfigError("dtw requires non-empty trajectories");
  }
  std::vector<double> d((m)*n);
  auto D = [&](std::size_t i, std::size_t j) -> double& { return d[i * n + j]; };

  D(0, 0) = euclidean_dist(p[0], q[0]);
  for (std::size_t j = 1; j < n; ++j)
    D(0, j) = euclidean_dist(p[0], q[j]) + D(0, j - 1);
  for (std::size_t i = 1; i < m; ++i) {
    D(i, 0) = euclidean_dist(p[i], q[0]) + D(i - 1, 0);
    for (std::size_t j = 1; j < n; ++j) {
      D(i, j) = euclidean_dist(p[i], q[j]) +
                std::min({D(i - 1, j - 1), D(i - 1, j), D(i, j - 1)});
    }
  }

  CorrespondenceSet out;
  out.total_cost = D(m - 1, n - 1);
  std::size_t i = m - 1, j = n - 1;
  out.pairs.emplace_back(static_cast<std::int32_t>(i),
                         static_cast<std::int32_t>(j));
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = D(i - 1, j - 1), up = D(i - 1, j), left = D(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    out.pairs.emplace_back(static_cast<std::int32_t>(i),
                           static_cast<std::int32_t>(j));
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  return out;
}

// DTW path filtered to correspondences within distance r; the cost is
// recomputed over the surviving pairs only, unpaired points stay uncosted.
inline CorrespondenceSet dtw_pruned(const Trajectory& p, const Trajectory& q,
                                    double r) {
  if (!(r > 0.0)) {
    throw ConfigError("dtw_pruned requires r > 0");
  }
  const CorrespondenceSet full = dtw(p, q);
  CorrespondenceSet out;
  for (const auto& [i, j] : full.pairs) {
    const double dist = euclidean_dist(p[static_cast<std::size_t>(i)],
                                       q[static_cast<std::size_t>(j)]);
    if (dist <= r) {
      out.pairs.emplace_back(i, j);
      out.total_cost += dist;
    }
  }
  return out;
}

// Maximum-score one-to-one non-crossing matching with affine gap scoring:
// a matched pair earns 1/(c + d^2) once, a maximal unmatched run on either
// sequence contributes a + delta * run. Three-state alignment in O(mn).
inline CorrespondenceSet seq_align(const Trajectory& p, const Trajectory& q,
                                   const ScoringParams& params) {
  const std::size_t m = p.size(), n = q.size();
  if (m == 0 || n == 0) {
    throw ConfigError("seq_align requires non-empty trajectories");
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const double a = params.a, g = params.delta;

  const std::size_t cols = n + 1;
  std::vector<double> match((m + 1) * cols, kNegInf);  // ends in a pair
  std::vector<double> skip_p((m + 1) * cols, kNegInf); // ends unmatched in P
  std::vector<double> skip_q((m + 1) * cols, kNegInf); // ends unmatched in Q
  std::vector<std::uint8_t> prov_m((m + 1) * cols), prov_p((m + 1) * cols),
      prov_q((m + 1) * cols);
  auto idx = [cols](std::size_t i, std::size_t j) { return i * cols + j; };

  match[idx(0, 0)] = 0.0;  // empty alignment
  for (std::size_t i = 1; i <= m; ++i) {
    const double open = match[idx(i - 1, 0)] + a + g;
    const double extend = skip_p[idx(i - 1, 0)] + g;
    skip_p[idx(i, 0)] = std::max(open, extend);
    prov_p[idx(i, 0)] = open >= extend ? 0 : 1;
  }
  for (std::size_t j = 1; j <= n; ++j) {
    const double open = match[idx(0, j - 1)] + a + g;
    const double extend = skip_q[idx(0, j - 1)] + g;
    skip_q[idx(0, j)] = std::max(open, extend);
    prov_q[idx(0, j)] = open >= extend ? 0 : 2;
  }

  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const double pair_score = delta_score(p[i - 1], q[j - 1], params.c);
      // best state at (i-1, j-1), tie order: match, skip_p, skip_q
      {
        double v = match[idx(i - 1, j - 1)];
        std::uint8_t w = 0;
        if (skip_p[idx(i - 1, j - 1)] > v) { v = skip_p[idx(i - 1, j - 1)]; w = 1; }
        if (skip_q[idx(i - 1, j - 1)] > v) { v = skip_q[idx(i - 1, j - 1)]; w = 2; }
        match[idx(i, j)] = v + pair_score;
        prov_m[idx(i, j)] = w;
      }
      {
        double v = match[idx(i - 1, j)] + a + g;
        std::uint8_t w = 0;
        if (skip_p[idx(i - 1, j)] + g > v) { v = skip_p[idx(i - 1, j)] + g; w = 1; }
        if (skip_q[idx(i - 1, j)] + a + g > v) { v = skip_q[idx(i - 1, j)] + a + g; w = 2; }
        skip_p[idx(i, j)] = v;
        prov_p[idx(i, j)] = w;
      }
      {
        double v = match[idx(i, j - 1)] + a + g;
        std::uint8_t w = 0;
        if (skip_p[idx(i, j - 1)] + a + g > v) { v = skip_p[idx(i, j - 1)] + a + g; w = 1; }
        if (skip_q[idx(i, j - 1)] + g > v) { v = skip_q[idx(i, j - 1)] + g; w = 2; }
        skip_q[idx(i, j)] = v;
        prov_q[idx(i, j)] = w;
      }
    }
  }

  CorrespondenceSet out;
  std::size_t i = m, j = n;
  std::uint8_t state = 0;
  {
    double v = match[idx(m, n)];
    if (skip_p[idx(m, n)] > v) { v = skip_p[idx(m, n)]; state = 1; }
    if (skip_q[idx(m, n)] > v) { v = skip_q[idx(m, n)]; state = 2; }
    out.total_cost = v;
  }
  while (i > 0 || j > 0) {
    if (state == 0) {
      // the empty-alignment corner
      if (i == 0 && j == 0) break;
      out.pairs.emplace_back(static_cast<std::int32_t>(i - 1),
                             static_cast<std::int32_t>(j - 1));
      state = prov_m[idx(i, j)];
      --i;
      --j;
    } else if (state == 1) {
      state = prov_p[idx(i, j)];
      --i;
    } else {
      state = prov_q[idx(i, j)];
      --j;
    }
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  return out;
}

// Non-crossing check shared by every correspondence producer: no two pairs
// (i,j), (k,l) with i<k and j>l.
inline bool pairs_non_crossing(
    const std::vector<std::pair<std::int32_t, std::int32_t>>& pairs) {
  auto sorted = pairs;
  std::sort(sorted.begin(), sorted.end());
  std::int32_t prev_i = -1, max_j_before = -1, max_j_group = -1;
  for (const auto& [i, j] : sorted) {
    if (i != prev_i) {
      max_j_before = std::max(max_j_before, max_j_group);
      prev_i = i;
      max_j_group = -1;
    }
    if (j < max_j_before) return false;
    max_j_group = std::max(max_j_group, j);
  }
  return true;
}

}  // namespace traj

#endif  // TRAJ_BASELINES_HPP_
