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

#ifndef TRAJ_ORACLE_HPP_
#define TRAJ_ORACLE_HPP_

// Exhaustive reference implementations for small instances. Everything here
// enumerates plainly and scores with the literal summation form; none of it
// shares code with the dynamic programs it is used to check.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

#include "traj/error.hpp"
#include "traj/scoring.hpp"
#include "traj/trajectory.hpp"

namespace traj::oracle {

namespace detail {

// Candidate maps for one direction: every entry is kGap or a target index,
// and assigned targets are non-decreasing (the graph form permits repeated
// targets; strictly crossing ones are rejected here, cross-direction
// crossings by validate_monotone).
inline std::vector<std::vector<std::int32_t>> self_monotone_maps(
    std::size_t len, std::int32_t targets) {
  std::vector<std::vector<std::int32_t>> out;
  std::vector<std::int32_t> cur(len, kGap);
  auto rec = [&](auto&& self, std::size_t pos, std::int32_t min_target) -> void {
    if (pos == len) {
      out.push_back(cur);
      return;
    }
    cur[pos] = kGap;
    self(self, pos + 1, min_target);
    for (std::int32_t t = min_target; t < targets; ++t) {
      cur[pos] = t;
      self(self, pos + 1, t);
    }
    cur[pos] = kGap;
  };
  rec(rec, 0, 0);
  return out;
}

inline double count_self_monotone(std::size_t len, std::size_t targets) {
  // ways(pos, min_target) counted iteratively; doubles to survive overflow
  std::vector<double> ways(targets + 1, 1.0);  // len 0
  for (std::size_t pos = 0; pos < len; ++pos) {
    std::vector<double> next(targets + 1, 0.0);
    for (std::size_t min_t = 0; min_t <= targets; ++min_t) {
      double total = ways[min_t];  // gap at this position
      for (std::size_t t = min_t; t < targets; ++t) total += ways[t];
      next[min_t] = total;
    }
    ways = next;
  }
  return ways[0];
}

inline void check_guard(std::size_t m, std::size_t n) {
  const double pairs =
      count_self_monotone(m, n) * count_self_monotone(n, m);
  if (pairs > 1e7) {
    throw ConfigError("oracle: instance too large for exhaustive enumeration");
  }
}

}  // namespace detail

// Visits every monotone assignment of an m x n instance exactly once, as
// visit(alpha, beta). Guarded against instances whose candidate count would
// make enumeration slow.
template <class Visitor>
void for_each_monotone(std::size_t m, std::size_t n, Visitor&& visit) {
  detail::check_guard(m, n);
  const auto alphas =
      detail::self_monotone_maps(m, static_cast<std::int32_t>(n));
  const auto betas =
      detail::self_monotone_maps(n, static_cast<std::int32_t>(m));
  for (const auto& alpha : alphas) {
    for (const auto& beta : betas) {
      if (!validate_monotone(alpha, beta, m, n)) {
        visit(alpha, beta);
      }
    }
  }
}

inline std::size_t count_monotone(std::size_t m, std::size_t n) {
  std::size_t count = 0;
  for_each_monotone(m, n, [&](const auto&, const auto&) { ++count; });
  return count;
}

// Independent recount: all (n+1)^m * (m+1)^n raw entry combinations, with no
// generation-side monotonicity, filtered through validate_monotone alone.
inline std::size_t count_monotone_by_raw_filter(std::size_t m, std::size_t n) {
  double raw = 1.0;
  for (std::size_t i = 0; i < m; ++i) raw *= static_cast<double>(n + 1);
  for (std::size_t j = 0; j < n; ++j) raw *= static_cast<double>(m + 1);
  if (raw > 1e6) {
    throw ConfigError("oracle: raw filter recount too large");
  }
  std::vector<std::int32_t> alpha(m, kGap), beta(n, kGap);
  std::size_t count = 0;
  auto advance = [](std::vector<std::int32_t>& v, std::int32_t hi) {
    for (auto& e : v) {
      if (e + 1 < hi) {
        ++e;
        return true;
      }
      e = kGap;
    }
    return false;
  };
  do {
    std::fill(beta.begin(), beta.end(), kGap);
    do {
      if (!validate_monotone(alpha, beta, m, n)) ++count;
    } while (advance(beta, static_cast<std::int32_t>(m)));
  } while (advance(alpha, static_cast<std::int32_t>(n)));
  return count;
}

struct BruteForceBest {
  double score = 0.0;
  std::vector<std::int32_t> alpha, beta;
};

// Maximum of the assignment score over every monotone assignment, found by
// enumeration. Handles empty sides (the empty map is the only candidate).
inline BruteForceBest brute_force_best(const Trajectory& p,
                                       const Trajectory& q,
                                       const ScoringParams& params) {
  BruteForceBest best;
  bool first = true;
  for_each_monotone(p.size(), q.size(),
                    [&](const std::vector<std::int32_t>& alpha,
                        const std::vector<std::int32_t>& beta) {
                      const double s = evaluate_score(p, q, alpha, beta, params);
                      if (first || s > best.score) {
                        first = false;
                        best.score = s;
                        best.alpha = alpha;
                        best.beta = beta;
                      }
                    });
  return best;
}

// Local reference: the tau-shifted optimum over every index window
// [i1..i2) x [j1..j2) of the two trajectories, floored at zero. Windows with
// one empty side are included (their score is a single gap run).
inline double brute_force_local_best(const Trajectory& p, const Trajectory& q,
                                     const ScoringParams& params) {
  if (!params.tau) {
    throw ConfigError("brute_force_local_best: tau required");
  }
  double best = 0.0;
  for (std::size_t i1 = 0; i1 <= p.size(); ++i1) {
    for (std::size_t i2 = i1; i2 <= p.size(); ++i2) {
      for (std::size_t j1 = 0; j1 <= q.size(); ++j1) {
        for (std::size_t j2 = j1; j2 <= q.size(); ++j2) {
          if (i1 == i2 && j1 == j2) continue;
          Trajectory pw, qw;
          pw.points.assign(p.points.begin() + static_cast<std::ptrdiff_t>(i1),
                           p.points.begin() + static_cast<std::ptrdiff_t>(i2));
          qw.points.assign(q.points.begin() + static_cast<std::ptrdiff_t>(j1),
                           q.points.begin() + static_cast<std::ptrdiff_t>(j2));
          best = std::max(best, brute_force_best(pw, qw, params).score);
        }
      }
    }
  }
  return best;
}

// Minimum total edge length over every monotone covering warp path, by
// explicit path expansion (no table reuse).
inline double dtw_min_cost_exhaustive(const Trajectory& p,
                                      const Trajectory& q) {
  if (p.size() == 0 || q.size() == 0) {
    throw ConfigError("dtw oracle: empty input");
  }
  const std::size_t m = p.size(), n = q.size();
  double best = std::numeric_limits<double>::infinity();
  auto rec = [&](auto&& self, std::size_t i, std::size_t j, double acc) -> void {
    acc += euclidean_dist(p[i], q[j]);
    if (i + 1 == m && j + 1 == n) {
      best = std::min(best, acc);
      return;
    }
    if (i + 1 < m && j + 1 < n) self(self, i + 1, j + 1, acc);
    if (i + 1 < m) self(self, i + 1, j, acc);
    if (j + 1 < n) self(self, i, j + 1, acc);
  };
  rec(rec, 0, 0, 0.0);
  return best;
}

inline std::size_t dtw_path_count(std::size_t m, std::size_t n) {
  std::size_t count = 0;
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> void {
    if (i + 1 == m && j + 1 == n) {
      ++count;
      return;
    }
    if (i + 1 < m && j + 1 < n) self(self, i + 1, j + 1);
    if (i + 1 < m) self(self, i + 1, j);
    if (j + 1 < n) self(self, i, j + 1);
  };
  rec(rec, 0, 0);
  return count;
}

// Maximum matching score over every one-to-one non-crossing matching,
// enumerated as equal-size index subsets paired in order.
inline double matching_max_score_exhaustive(const Trajectory& p,
                                            const Trajectory& q,
                                            const ScoringParams& params) {
  const std::size_t m = p.size(), n = q.size();
  if (m == 0 || n == 0 || m > 20 || n > 20) {
    throw ConfigError("matching oracle: unsupported size");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mi = 0; mi < (1u << m); ++mi) {
    for (std::uint32_t mj = 0; mj < (1u << n); ++mj) {
      if (std::popcount(mi) != std::popcount(mj)) continue;
      std::vector<std::size_t> is, js;
      for (std::size_t i = 0; i < m; ++i)
        if (mi & (1u << i)) is.push_back(i);
      for (std::size_t j = 0; j < n; ++j)
        if (mj & (1u << j)) js.push_back(j);
      double s = 0.0;
      for (std::size_t k = 0; k < is.size(); ++k) {
        s += delta_score(p[is[k]], q[js[k]], params.c);
      }
      // unmatched runs on both sequences
      auto add_runs = [&](std::uint32_t mask, std::size_t len) {
        std::size_t run = 0;
        for (std::size_t k = 0; k < len; ++k) {
          if (mask & (1u << k)) {
            if (run > 0) s += params.a + params.delta * static_cast<double>(run);
            run = 0;
          } else {
            ++run;
          }
        }
        if (run > 0) s += params.a + params.delta * static_cast<double>(run);
      };
      add_runs(mi, m);
      add_runs(mj, n);
      best = std::max(best, s);
    }
  }
  return best;
}

}  // namespace traj::oracle

#endif  // TRAJ_ORACLE_HPP_
