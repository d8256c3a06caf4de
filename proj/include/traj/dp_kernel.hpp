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

#ifndef TRAJ_DP_KERNEL_HPP_
#define TRAJ_DP_KERNEL_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "traj/error.hpp"
#include "traj/geometry.hpp"
#include "traj/scoring.hpp"
#include "traj/trajectory.hpp"

namespace traj::detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Values of the eight score functions at one cell (i, j), where i and j are
// prefix lengths. Restrictions on the last points of the prefixes:
//   gap_pq       both p_i and q_j are gap points, both charged
//   gap_p_phi_q  p_i gap point (charged); q_j no outgoing edge, uncharged
//   phi_p_gap_q  p_i no outgoing edge, uncharged; q_j gap point (charged)
//   free_p       p_i no outgoing edge, uncharged
//   free_q       q_j no outgoing edge, uncharged
//   gap_p        p_i gap point (charged)
//   gap_q        q_j gap point (charged)
//   best         unrestricted
// Unsatisfiable states hold -inf; -inf plus anything stays -inf.
struct CellVals {
  double gap_pq;
  double gap_p_phi_q;
  double phi_p_gap_q;
  double free_p;
  double free_q;
  double gap_p;
  double gap_q;
  double best;
};

inline CellVals neg_inf_cell() {
  return CellVals{kNegInf, kNegInf, kNegInf, kNegInf,
                  kNegInf, kNegInf, kNegInf, kNegInf};
}

// best = 0 with no points on either side.
inline CellVals origin_cell() {
  CellVals c = neg_inf_cell();
  c.best = 0.0;
  return c;
}

// Winning argument index per table, packed per cell. The argument order of
// each max matches the recurrences' written order; the first maximal
// argument wins, which makes backtracking deterministic.
inline constexpr std::uint32_t kShiftGapPQ = 0;      // 2 bits
inline constexpr std::uint32_t kShiftGapPPhiQ = 2;   // 2 bits
inline constexpr std::uint32_t kShiftPhiPGapQ = 4;   // 2 bits
inline constexpr std::uint32_t kShiftFreeP = 6;      // 2 bits
inline constexpr std::uint32_t kShiftFreeQ = 8;      // 2 bits
inline constexpr std::uint32_t kShiftGapP = 10;      // 2 bits
inline constexpr std::uint32_t kShiftGapQ = 12;      // 2 bits
inline constexpr std::uint32_t kShiftBest = 14;      // 3 bits

inline void take(double cand, int idx, double& v, int& w) {
  if (cand > v) {
    v = cand;
    w = idx;
  }
}

// One cell update. `edge_p` is the score of the directed edge out of p_i at
// this cell, `edge_q` the score of the edge out of q_j (both already
// tau-shifted in local mode); `gap_ext` is the per-gap-point score. Border
// cells pass edge_p = edge_q = -inf together with an all--inf neighbor,
// which reduces every table to its base-case value.
inline CellVals dp_cell(const CellVals& up, const CellVals& left,
                        double edge_p, double edge_q, double a, double gap_ext,
                        bool zero_floor, std::uint32_t& prov_out) {
  CellVals out;
  std::uint32_t prov = 0;
  double v;
  int w;

  // both last points gap
  v = up.gap_q + a + gap_ext;
  w = 0;
  take(up.gap_pq + gap_ext, 1, v, w);
  take(left.gap_p + a + gap_ext, 2, v, w);
  take(left.gap_pq + gap_ext, 3, v, w);
  out.gap_pq = v;
  prov |= static_cast<std::uint32_t>(w) << kShiftGapPQ;

  // p_i gap; q_j uncharged, no outgoing edge
  v = up.free_q + a + gap_ext;
  w = 0;
  take(up.gap_p_phi_q + gap_ext, 1, v, w);
  take(left.gap_p, 2, v, w);
  out.gap_p_phi_q = v;
  prov |= static_cast<std::uint32_t>(w) << kShiftGapPPhiQ;

  // p_i uncharged, no outgoing edge; q_j gap
  v = left.free_p + a + gap_ext;
  w = 0;
  take(left.phi_p_gap_q + gap_ext, 1, v, w);
  take(up.gap_q, 2, v, w);
  out.phi_p_gap_q = v;
  prov |= static_cast<std::uint32_t>(w) << kShiftPhiPGapQ;

  // p_i uncharged, no outgoing edge
  v = out.phi_p_gap_q;
  w = 0;
  take(up.free_q + edge_q, 1, v, w);
  take(left.free_p + edge_q, 2, v, w);
  take(up.best, 3, v, w);
  out.free_p = v;
  prov |= static_cast<std::uint32_t>(w) << kShiftFreeP;

  // q_j uncharged, no outgoing edge
  v = out.gap_p_phi_q;
  w = 0;
  take(left.free_p + edge_p, 1, v, w);
  take(up.free_q + edge_p, 2, v, w);
  take(left.best, 3, v, w);
  out.free_q = v;
  prov |= static_cast<std::uint32_t>(w) << kShiftFreeQ;

  // p_i gap
  v = up.best + a + gap_ext;
  w = 0;
  take(up.gap_p + gap_ext, 1, v, w);
  take(out.gap_p_phi_q + edge_q, 2, v, w);
  take(out.gap_pq, 3, v, w);
  out.gap_p = v;
  prov |= static_cast<std::uint32_t>(w) << kShiftGapP;

  // q_j gap
  v = left.best + a + gap_ext;
  w = 0;
  take(left.gap_q + gap_ext, 1, v, w);
  take(out.phi_p_gap_q + edge_p, 2, v, w);
  take(out.gap_pq, 3, v, w);
  out.gap_q = v;
  prov |= static_cast<std::uint32_t>(w) << kShiftGapQ;

  // unrestricted
  v = out.gap_p;
  w = 0;
  take(out.gap_q, 1, v, w);
  take(out.free_p + edge_p, 2, v, w);
  take(out.free_q + edge_q, 3, v, w);
  if (zero_floor) take(0.0, 4, v, w);
  out.best = v;
  prov |= static_cast<std::uint32_t>(w) << kShiftBest;

  prov_out = prov;
  return out;
}

// Edge scores of the discrete model: both directions use the point-to-point
// distance at the cell.
struct DiscreteDelta {
  const Trajectory* p;
  const Trajectory* q;
  double c;
  double tau;

  std::pair<double, double> operator()(std::size_t i, std::size_t j) const {
    const double d = delta_score((*p)[i - 1], (*q)[j - 1], c) - tau;
    return {d, d};
  }
};

// Edge scores of the semi-continuous model: the edge out of p_i targets the
// closest point on the segment preceding q_j (the endpoint itself when no
// preceding segment exists), and symmetrically for edges out of q_j.
struct SemiContinuousDelta {
  const Trajectory* p;
  const Trajectory* q;
  double c;
  double tau;

  // Squared distance to the preceding segment, evaluated so that it never
  // exceeds the squared distance to either vertex even after rounding.
  static double target_sq_dist(const Trajectory& on, std::size_t idx,
                               Point from) {
    if (idx == 0) return squared_dist(from, on[0]);
    const auto proj = point_segment_dist(from, on[idx - 1], on[idx]);
    return std::min({squared_dist(from, proj.closest),
                     squared_dist(from, on[idx]),
                     squared_dist(from, on[idx - 1])});
  }

  std::pair<double, double> operator()(std::size_t i, std::size_t j) const {
    const double dp2 = target_sq_dist(*q, j - 1, (*p)[i - 1]);
    const double dq2 = target_sq_dist(*p, i - 1, (*q)[j - 1]);
    return {1.0 / (c + dp2) - tau, 1.0 / (c + dq2) - tau};
  }
};

// Runs the forward pass over all cells of the (m+1) x (n+1) grid in row
// order, keeping two rows of values. The sink sees every cell once:
// sink(i, j, vals, prov). Returns the value of the unrestricted score at
// (m, n). O(mn) time, O(n) value storage.
template <class Delta, class Sink>
double run_forward(std::size_t m, std::size_t n, double a, double gap_ext,
                   bool zero_floor, const Delta& delta, Sink&& sink) {
  std::vector<CellVals> prev(n + 1), cur(n + 1);
  const CellVals border = neg_inf_cell();
  std::uint32_t prov = 0;

  prev[0] = origin_cell();
  sink(std::size_t{0}, std::size_t{0}, prev[0], std::uint32_t{0});
  for (std::size_t j = 1; j <= n; ++j) {
    prev[j] = dp_cell(border, prev[j - 1], kNegInf, kNegInf, a, gap_ext,
                      zero_floor, prov);
    sink(std::size_t{0}, j, prev[j], prov);
  }
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = dp_cell(prev[0], border, kNegInf, kNegInf, a, gap_ext, zero_floor,
                     prov);
    sink(i, std::size_t{0}, cur[0], prov);
    for (std::size_t j = 1; j <= n; ++j) {
      const auto [edge_p, edge_q] = delta(i, j);
      cur[j] = dp_cell(prev[j], cur[j - 1], edge_p, edge_q, a, gap_ext,
                       zero_floor, prov);
      sink(i, j, cur[j], prov);
    }
    std::swap(prev, cur);
  }
  return prev[n].best;
}

// Running maximum over cells of the zero-floored score; with row-major
// visits the first maximum is the smallest (i, then j) one.
struct LocalMax {
  double value = 0.0;
  std::size_t i = 0, j = 0;

  void offer(std::size_t ci, std::size_t cj, double v) {
    if (v > value) {
      value = v;
      i = ci;
      j = cj;
    }
  }
};

// The eight DP states, in per-cell evaluation order.
enum class DpState : std::uint8_t {
  kGapPQ,
  kGapPPhiQ,
  kPhiPGapQ,
  kFreeP,
  kFreeQ,
  kGapP,
  kGapQ,
  kBest,
};

inline int prov_winner(std::uint32_t prov, DpState s) {
  switch (s) {
    case DpState::kGapPQ: return static_cast<int>((prov >> kShiftGapPQ) & 3u);
    case DpState::kGapPPhiQ:
      return static_cast<int>((prov >> kShiftGapPPhiQ) & 3u);
    case DpState::kPhiPGapQ:
      return static_cast<int>((prov >> kShiftPhiPGapQ) & 3u);
    case DpState::kFreeP: return static_cast<int>((prov >> kShiftFreeP) & 3u);
    case DpState::kFreeQ: return static_cast<int>((prov >> kShiftFreeQ) & 3u);
    case DpState::kGapP: return static_cast<int>((prov >> kShiftGapP) & 3u);
    case DpState::kGapQ: return static_cast<int>((prov >> kShiftGapQ) & 3u);
    case DpState::kBest: return static_cast<int>((prov >> kShiftBest) & 7u);
  }
  return 0;
}

// Recovers one optimal assignment from the recorded winners, starting at the
// given cell in the unrestricted state. commit_alpha(pi, qj) is invoked once
// per directed edge out of P[pi] whose cell targets sample qj, and
// commit_beta(qj, pi) symmetrically; indices are 0-based. Returns the cell
// where the walk ended: (0,0), or the cell of a zero reset in local mode.
template <class CommitAlpha, class CommitBeta>
std::pair<std::size_t, std::size_t> walk_provenance(
    std::span<const std::uint32_t> prov, std::size_t cols, std::size_t i,
    std::size_t j, CommitAlpha&& commit_alpha, CommitBeta&& commit_beta) {
  DpState s = DpState::kBest;
  // Every step either moves down/left or advances along the finite
  // same-cell chain best -> gap -> gap-both, so this terminates.
  while (true) {
    if (s == DpState::kBest && i == 0 && j == 0) return {0, 0};
    const int w = prov_winner(prov[i * cols + j], s);
    switch (s) {
      case DpState::kBest:
        if (w == 0) s = DpState::kGapP;
        else if (w == 1) s = DpState::kGapQ;
        else if (w == 2) { commit_alpha(i - 1, j - 1); s = DpState::kFreeP; }
        else if (w == 3) { commit_beta(j - 1, i - 1); s = DpState::kFreeQ; }
        else return {i, j};  // zero reset
        break;
      case DpState::kGapP:
        if (w == 0) { s = DpState::kBest; --i; }
        else if (w == 1) { --i; }
        else if (w == 2) { commit_beta(j - 1, i - 1); s = DpState::kGapPPhiQ; }
        else s = DpState::kGapPQ;
        break;
      case DpState::kGapQ:
        if (w == 0) { s = DpState::kBest; --j; }
        else if (w == 1) { --j; }
        else if (w == 2) { commit_alpha(i - 1, j - 1); s = DpState::kPhiPGapQ; }
        else s = DpState::kGapPQ;
        break;
      case DpState::kGapPQ:
        if (w == 0) { s = DpState::kGapQ; --i; }
        else if (w == 1) { --i; }
        else if (w == 2) { s = DpState::kGapP; --j; }
        else { --j; }
        break;
      case DpState::kFreeP:
        if (w == 0) s = DpState::kPhiPGapQ;
        else if (w == 1) { commit_beta(j - 1, i - 1); s = DpState::kFreeQ; --i; }
        else if (w == 2) { commit_beta(j - 1, i - 1); --j; }
        else { s = DpState::kBest; --i; }
        break;
      case DpState::kFreeQ:
        if (w == 0) s = DpState::kGapPPhiQ;
        else if (w == 1) { commit_alpha(i - 1, j - 1); s = DpState::kFreeP; --j; }
        else if (w == 2) { commit_alpha(i - 1, j - 1); --i; }
        else { s = DpState::kBest; --j; }
        break;
      case DpState::kPhiPGapQ:
        if (w == 0) { s = DpState::kFreeP; --j; }
        else if (w == 1) { --j; }
        else { s = DpState::kGapQ; --i; }
        break;
      case DpState::kGapPPhiQ:
        if (w == 0) { s = DpState::kFreeQ; --i; }
        else if (w == 1) { --i; }
        else { s = DpState::kGapP; --j; }
        break;
    }
  }
}

}  // namespace traj::detail

#endif  // TRAJ_DP_KERNEL_HPP_
