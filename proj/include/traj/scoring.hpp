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

#ifndef TRAJ_SCORING_HPP_
#define TRAJ_SCORING_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "traj/error.hpp"
#include "traj/geometry.hpp"
#include "traj/trajectory.hpp"

namespace traj {

// Entry of an assignment map: a 0-based index into the other trajectory, or
// one of the two flags below.
inline constexpr std::int32_t kGap = -1;
// Local mode only: the point lies outside the matched region and is neither
// assigned nor scored as a gap point.
inline constexpr std::int32_t kUnaligned = -2;

enum class Side : std::uint8_t { kP, kQ };

// Parameters of the scoring function. An edge scores 1/(c + d^2); a maximal
// run of g gap points scores a + delta * g. tau is the per-term shift of the
// local variant and is absent in global mode.
struct ScoringParams {
  double c = 0.0;        // squared-length offset of the edge score
  double delta = 0.0;    // per-gap-point extension score
  double a = 0.0;        // gap-open score, -l * delta
  double r = 0.0;        // distance threshold the parameters derive from
  int min_gap_len = 0;   // l
  std::optional<double> tau;

  double tau_or_zero() const { return tau.value_or(0.0); }
};

// c = r/2, delta = 1/(c + r^2), a = -l * delta.
inline ScoringParams params_from_threshold(double r, int l) {
  if (!(r > 0.0)) {
    throw ConfigError("params_from_threshold: r must be positive");
  }
  if (l < 0) {
    throw ConfigError("params_from_threshold: l must be non-negative");
  }
  ScoringParams p;
  p.r = r;
  p.min_gap_len = l;
  p.c = r / 2.0;
  p.delta = 1.0 / (p.c + r * r);
  p.a = -static_cast<double>(l) * p.delta;
  return p;
}

// delta(p, q) = 1/(c + ||p - q||^2); range (0, 1/c].
inline double delta_score(Point p, Point q, double c) {
  return 1.0 / (c + squared_dist(p, q));
}

// A maximal contiguous run of gap points on one trajectory.
struct Gap {
  Side side = Side::kP;
  std::size_t start = 0;  // 0-based index of the first gap point
  std::size_t length = 0;
};

inline bool operator==(const Gap& a, const Gap& b) {
  return a.side == b.side && a.start == b.start && a.length == b.length;
}

// Maximal runs of kGap entries, in index order. kUnaligned entries terminate
// runs without being counted.
inline std::vector<Gap> gaps_of(std::span<const std::int32_t> map, Side side) {
  std::vector<Gap> gaps;
  std::size_t i = 0;
  while (i < map.size()) {
    if (map[i] != kGap) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < map.size() && map[i] == kGap) ++i;
    gaps.push_back(Gap{side, start, i - start});
  }
  return gaps;
}

// Score of the assignment (alpha, beta): one term per directed edge plus
// a + delta*|g| per gap. With tau set, each edge term becomes
// delta_score - tau and each gap contributes a + (delta - tau)*|g|.
inline double evaluate_score(const Trajectory& P, const Trajectory& Q,
                             std::span<const std::int32_t> alpha,
                             std::span<const std::int32_t> beta,
                             const ScoringParams& params) {
  const std::size_t m = P.size();
  const std::size_t n = Q.size();
  if (alpha.size() != m || beta.size() != n) {
    throw ConfigError("evaluate_score: map length mismatch");
  }
  const double tau = params.tau_or_zero();
  double score = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::int32_t j = alpha[i];
    if (j == kGap || j == kUnaligned) continue;
    if (j < 0 || static_cast<std::size_t>(j) >= n) {
      throw ConfigError("evaluate_score: alpha index out of range");
    }
    score += delta_score(P[i], Q[static_cast<std::size_t>(j)], params.c) - tau;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const std::int32_t i = beta[j];
    if (i == kGap || i == kUnaligned) continue;
    if (i < 0 || static_cast<std::size_t>(i) >= m) {
      throw ConfigError("evaluate_score: beta index out of range");
    }
    score += delta_score(Q[j], P[static_cast<std::size_t>(i)], params.c) - tau;
  }
  const double gap_ext = params.delta - tau;
  for (const Gap& g : gaps_of(alpha, Side::kP)) {
    score += params.a + gap_ext * static_cast<double>(g.length);
  }
  for (const Gap& g : gaps_of(beta, Side::kQ)) {
    score += params.a + gap_ext * static_cast<double>(g.length);
  }
  return score;
}

// Raw score divided by its supremum (m+n)/c, the value of matching every
// point at distance zero. Negative inputs are reported as-is, not clamped.
inline double normalize(double score, std::size_t m, std::size_t n, double c) {
  return score * c / static_cast<double>(m + n);
}

// One optimal assignment plus its gap structure and scores.
struct AssignmentResult {
  std::vector<std::int32_t> alpha;  // size m; q-index or kGap
  std::vector<std::int32_t> beta;   // size n; p-index or kGap
  std::vector<Gap> gaps;
  double score = 0.0;
  double normalized = 0.0;
};

// Checks the non-crossing property of the directed edge set
// {(p_i, q_alpha(i))} u {(q_j, p_beta(j))}. Two edges with index pairs (i,j)
// and (k,l) cross iff i<k and j>l, or i>k and j<l; exactly-opposite edges
// share an index pair and are exempt by construction. Returns a description
// of the first violation found, or nullopt if the assignment is monotone.
inline std::optional<std::string> validate_monotone(
    std::span<const std::int32_t> alpha, std::span<const std::int32_t> beta,
    std::size_t m, std::size_t n) {
  if (alpha.size() != m || beta.size() != n) {
    return "map length mismatch";
  }
  // edges as (p-index, q-index) pairs
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  edges.reserve(m + n);
  for (std::size_t i = 0; i < m; ++i) {
    const std::int32_t j = alpha[i];
    if (j == kGap || j == kUnaligned) continue;
    if (j < 0 || static_cast<std::size_t>(j) >= n) {
      return "alpha[" + std::to_string(i) + "] out of range";
    }
    edges.emplace_back(static_cast<std::int64_t>(i), j);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const std::int32_t i = beta[j];
    if (i == kGap || i == kUnaligned) continue;
    if (i < 0 || static_cast<std::size_t>(i) >= m) {
      return "beta[" + std::to_string(j) + "] out of range";
    }
    edges.emplace_back(i, static_cast<std::int64_t>(j));
  }
  std::sort(edges.begin(), edges.end());
  // After sorting by (p, q), a crossing exists iff some edge has a smaller
  // q-index than an edge with a strictly smaller p-index.
  std::int64_t prev_p = -1;
  std::int64_t max_q_before = -1;        // max q over edges with p < current p
  std::int64_t max_q_current_p = -1;     // max q within the current p group
  std::int64_t argmax_p = -1;
  for (const auto& [p, q] : edges) {
    if (p != prev_p) {
      if (max_q_current_p > max_q_before) {
        argmax_p = prev_p;
        max_q_before = max_q_current_p;
      }
      prev_p = p;
      max_q_current_p = -1;
    }
    if (q < max_q_before) {
      return "edges (" + std::to_string(argmax_p) + "," +
             std::to_string(max_q_before) + ") and (" + std::to_string(p) +
             "," + std::to_string(q) + ") cross";
    }
    max_q_current_p = std::max(max_q_current_p, q);
  }
  return std::nullopt;
}

}  // namespace traj

#endif  // TRAJ_SCORING_HPP_
