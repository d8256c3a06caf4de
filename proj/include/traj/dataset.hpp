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

#ifndef TRAJ_DATASET_HPP_
#define TRAJ_DATASET_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "traj/baselines.hpp"
#include "traj/error.hpp"
#include "traj/global_align.hpp"
#include "traj/scoring.hpp"
#include "traj/trajectory.hpp"

namespace traj {

enum class Method { kAssignment, kDtw, kDtwPruned, kSeqAlign };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::kAssignment: return "assignment";
    case Method::kDtw: return "dtw";
    case Method::kDtwPruned: return "dtw-pruned";
    case Method::kSeqAlign: return "seqalign";
  }
  return "";
}

// Result of one unordered pair (a, b). For the assignment method alpha/beta
// are filled; the other methods fill pairs. `normalized` is the normalized
// score for score-based methods and the mean matched distance for dtw and
// dtw-pruned.
struct PairResult {
  std::size_t a = 0, b = 0;
  double score = 0.0;
  double normalized = 0.0;
  std::size_t edges = 0;
  std::size_t gaps_p = 0, gaps_q = 0;
  std::vector<std::int32_t> alpha, beta;
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
};

namespace detail {

inline PairResult compute_pair(const Trajectory& A, const Trajectory& B,
                               Method method, const ScoringParams& params) {
  PairResult r;
  switch (method) {
    case Method::kAssignment: {
      const AssignmentResult res = global_align(A, B, params);
      r.score = res.score;
      r.normalized = res.normalized;
      r.alpha = res.alpha;
      r.beta = res.beta;
      for (auto v : res.alpha) r.edges += v != kGap;
      for (auto v : res.beta) r.edges += v != kGap;
      for (const auto& g : res.gaps) {
        ++(g.side == Side::kP ? r.gaps_p : r.gaps_q);
      }
      break;
    }
    case Method::kDtw:
    case Method::kDtwPruned: {
      const CorrespondenceSet cs = method == Method::kDtw
                                       ? dtw(A, B)
                                       : dtw_pruned(A, B, params.r);
      r.score = cs.total_cost;
      r.edges = cs.pairs.size();
      r.normalized = cs.pairs.empty()
                         ? 0.0
                         : cs.total_cost / static_cast<double>(cs.pairs.size());
      r.pairs = cs.pairs;
      break;
    }
    case Method::kSeqAlign: {
      const CorrespondenceSet cs = seq_align(A, B, params);
      r.score = cs.total_cost;
      r.normalized = normalize(cs.total_cost, A.size(), B.size(), params.c);
      r.edges = cs.pairs.size();
      r.pairs = cs.pairs;
      break;
    }
  }
  return r;
}

}  // namespace detail

// All unordered pairs, each computed once. Pair order is fixed by input
// order ((0,1), (0,2), ..., (1,2), ...) and the result is identical for any
// worker count.
inline std::vector<PairResult> all_pairs(std::span<const Trajectory> trajs,
                                         Method method,
                                         const ScoringParams& params,
                                         unsigned workers = 0) {
  if (trajs.size() < 2) {
    throw ConfigError("all_pairs requires at least 2 trajectories");
  }
  std::vector<std::pair<std::size_t, std::size_t>> index;
  for (std::size_t a = 0; a < trajs.size(); ++a) {
    for (std::size_t b = a + 1; b < trajs.size(); ++b) index.emplace_back(a, b);
  }
  std::vector<PairResult> results(index.size());
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = std::min<unsigned>(workers, static_cast<unsigned>(index.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= index.size()) return;
      const auto [a, b] = index[k];
      results[k] = detail::compute_pair(trajs[a], trajs[b], method, params);
      results[k].a = a;
      results[k].b = b;
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

// Per-trajectory, per-point correspondence counts over a dataset.
// assignment: number of distinct other trajectories the point has an
// outgoing edge to; dtw: raw count of correspondence pairs the point is part
// of; dtw-pruned: distinct other trajectories over surviving pairs.
struct ImportanceMap {
  Method method = Method::kAssignment;
  std::vector<std::vector<std::size_t>> counts;  // [trajectory][point]
};

inline ImportanceMap importance(std::span<const Trajectory> trajs,
                                std::span<const PairResult> results,
                                Method method) {
  ImportanceMap map;
  map.method = method;
  map.counts.resize(trajs.size());
  for (std::size_t t = 0; t < trajs.size(); ++t) {
    map.counts[t].assign(trajs[t].size(), 0);
  }
  for (const PairResult& r : results) {
    if (method == Method::kAssignment) {
      if (r.alpha.size() != trajs[r.a].size() ||
          r.beta.size() != trajs[r.b].size()) {
        throw ConfigError("importance: results do not match the method");
      }
      for (std::size_t i = 0; i < r.alpha.size(); ++i) {
        if (r.alpha[i] != kGap) ++map.counts[r.a][i];
      }
      for (std::size_t j = 0; j < r.beta.size(); ++j) {
        if (r.beta[j] != kGap) ++map.counts[r.b][j];
      }
    } else if (method == Method::kDtw) {
      for (const auto& [i, j] : r.pairs) {
        ++map.counts[r.a][static_cast<std::size_t>(i)];
        ++map.counts[r.b][static_cast<std::size_t>(j)];
      }
    } else if (method == Method::kDtwPruned) {
      std::vector<bool> in_a(trajs[r.a].size(), false),
          in_b(trajs[r.b].size(), false);
      for (const auto& [i, j] : r.pairs) {
        in_a[static_cast<std::size_t>(i)] = true;
        in_b[static_cast<std::size_t>(j)] = true;
      }
      for (std::size_t i = 0; i < in_a.size(); ++i)
        if (in_a[i]) ++map.counts[r.a][i];
      for (std::size_t j = 0; j < in_b.size(); ++j)
        if (in_b[j]) ++map.counts[r.b][j];
    } else {
      throw ConfigError("importance: unsupported method");
    }
  }
  return map;
}

// Equal-width histogram over [min, max], linear or log10 domain, with the
// bins holding the mean and rms flagged. Zero distances fall in the first
// bin under log scale via a 1e-3 m clamp.
struct Histogram {
  bool log_scale = false;
  std::vector<double> edges;        // bins + 1 monotone edges (data domain)
  std::vector<std::size_t> counts;  // size bins
  double mean = 0.0;
  double rms = 0.0;
  std::size_t mean_bin = 0;
  std::size_t rms_bin = 0;
};

inline Histogram distance_histogram(std::span<const double> distances,
                                    std::size_t bins, bool log_scale) {
  if (distances.empty()) {
    throw ConfigError("distance_histogram: empty input");
  }
  if (bins < 1) {
    throw ConfigError("distance_histogram: bins must be >= 1");
  }
  constexpr double kLogClamp = 1e-3;
  auto transform = [&](double d) {
    return log_scale ? std::log10(std::max(d, kLogClamp)) : d;
  };

  double lo = transform(distances[0]), hi = lo;
  double sum = 0.0, sum_sq = 0.0;
  for (const double d : distances) {
    const double t = transform(d);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
    sum += d;
    sum_sq += d * d;
  }
  const double width = (hi - lo) / static_cast<double>(bins);

  Histogram h;
  h.log_scale = log_scale;
  h.mean = sum / static_cast<double>(distances.size());
  h.rms = std::sqrt(sum_sq / static_cast<double>(distances.size()));
  auto bin_of = [&](double t) {
    if (width <= 0.0) return std::size_t{0};
    const auto k = static_cast<std::ptrdiff_t>((t - lo) / width);
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
        k, 0, static_cast<std::ptrdiff_t>(bins) - 1));
  };
  h.counts.assign(bins, 0);
  for (const double d : distances) ++h.counts[bin_of(transform(d))];
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) {
    const double t = lo + width * static_cast<double>(k);
    h.edges[k] = log_scale ? std::pow(10.0, t) : t;
  }
  h.mean_bin = bin_of(transform(h.mean));
  h.rms_bin = bin_of(transform(h.rms));
  return h;
}

// --- CSV serialization -----------------------------------------------------

inline std::string pairwise_to_csv(std::span<const Trajectory> trajs,
                                   std::span<const PairResult> results) {
  std::ostringstream out;
  out.precision(17);
  out << "idA,idB,score,normalized,edges,gapsP,gapsQ\n";
  for (const PairResult& r : results) {
    out << trajs[r.a].id << ',' << trajs[r.b].id << ',' << r.score << ','
        << r.normalized << ',' << r.edges << ',' << r.gaps_p << ',' << r.gaps_q
        << '\n';
  }
  return out.str();
}

// Rows ordered by trajectory id, then point index.
inline std::string importance_to_csv(std::span<const Trajectory> trajs,
                                     const ImportanceMap& map) {
  std::ostringstream out;
  out.precision(17);
  out << "trajectory_id,point_index,x,y,count\n";
  std::map<std::string, std::size_t> by_id;
  for (std::size_t t = 0; t < trajs.size(); ++t) by_id.emplace(trajs[t].id, t);
  for (const auto& [id, t] : by_id) {
    for (std::size_t i = 0; i < map.counts[t].size(); ++i) {
      out << id << ',' << i << ',' << trajs[t][i].x << ',' << trajs[t][i].y
          << ',' << map.counts[t][i] << '\n';
    }
  }
  return out.str();
}

inline std::string histogram_to_csv(const Histogram& h) {
  std::ostringstream out;
  out.precision(17);
  out << "bin_lo,bin_hi,count,is_mean_bin,is_rms_bin\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    out << h.edges[k] << ',' << h.edges[k + 1] << ',' << h.counts[k] << ','
        << (k == h.mean_bin ? 1 : 0) << ',' << (k == h.rms_bin ? 1 : 0)
        << '\n';
  }
  return out.str();
}

}  // namespace traj

#endif  // TRAJ_DATASET_HPP_
