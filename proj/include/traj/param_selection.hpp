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

#ifndef TRAJ_PARAM_SELECTION_HPP_
#define TRAJ_PARAM_SELECTION_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "traj/error.hpp"
#include "traj/global_align.hpp"
#include "traj/scoring.hpp"
#include "traj/trajectory.hpp"

namespace traj {

// Root mean square of the distances kept after discarding the given
// fraction of the largest ones; the ceiling keeps at least one value.
inline double rms_of(std::vector<double> distances, double discard_frac) {
  if (distances.empty()) {
    throw ConfigError("rms_of: empty input");
  }
  if (discard_frac < 0.0 || discard_frac >= 1.0) {
    throw ConfigError("rms_of: discard fraction must be in [0, 1)");
  }
  std::sort(distances.begin(), distances.end());
  const auto keep = static_cast<std::size_t>(
      std::ceil((1.0 - discard_frac) * static_cast<double>(distances.size())));
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < keep; ++i) sum_sq += distances[i] * distances[i];
  return std::sqrt(sum_sq / static_cast<double>(keep));
}

struct ParamIteration {
  double r = 0.0;    // threshold used for this iteration's alignment
  double rms = 0.0;  // rms of the kept edge distances (0 when no edges)
  double score = 0.0;
  std::size_t edges = 0;
};

struct ParamTrace {
  std::vector<ParamIteration> iterations;
  bool converged = false;
  double final_r = 0.0;
  ScoringParams final_params;
};

struct SelectOptions {
  double discard_frac = 0.1;
  double c1 = 2.0;
  double rel_tol = 0.01;
  int max_iters = 50;
  std::optional<double> r_min;
};

// keeps params_from_threshold well defined at the all-zero-distance fixpoint
inline constexpr double kThresholdFloor = 1e-6;

// Iterative threshold inference: align, take the rms of the kept edge
// distances, set r to c1 * rms, repeat until r stabilizes. Distances from
// both edge directions are used.
inline ParamTrace select_params(const Trajectory& p, const Trajectory& q,
                                double r_hat, int l,
                                const SelectOptions& options = {}) {
  if (!(r_hat > 0.0)) {
    throw ConfigError("select_params: r_hat must be positive");
  }
  ParamTrace trace;
  double r = std::max(r_hat, kThresholdFloor);
  for (int iter = 0; iter < options.max_iters; ++iter) {
    const ScoringParams params = params_from_threshold(r, l);
    const AssignmentResult res = global_align(p, q, params);

    std::vector<double> dists;
    for (std::size_t i = 0; i < res.alpha.size(); ++i) {
      if (res.alpha[i] != kGap)
        dists.push_back(euclidean_dist(
            p[i], q[static_cast<std::size_t>(res.alpha[i])]));
    }
    for (std::size_t j = 0; j < res.beta.size(); ++j) {
      if (res.beta[j] != kGap)
        dists.push_back(euclidean_dist(
            q[j], p[static_cast<std::size_t>(res.beta[j])]));
    }

    ParamIteration rec;
    rec.r = r;
    rec.score = res.score;
    rec.edges = dists.size();
    if (dists.empty()) {
      trace.iterations.push_back(rec);
      trace.converged = false;
      trace.final_r = r;
      trace.final_params = params;
      return trace;
    }
    rec.rms = rms_of(dists, options.discard_frac);
    trace.iterations.push_back(rec);

    double r_new = options.c1 * rec.rms;
    if (options.r_min && r_new <= *options.r_min) {
      trace.converged = true;
      trace.final_r = std::max(*options.r_min, kThresholdFloor);
      trace.final_params = params_from_threshold(trace.final_r, l);
      return trace;
    }
    r_new = std::max(r_new, kThresholdFloor);
    if (std::abs(r_new - r) / r < options.rel_tol) {
      trace.converged = true;
      trace.final_r = r_new;
      trace.final_params = params_from_threshold(r_new, l);
      return trace;
    }
    r = r_new;
  }
  trace.converged = false;
  trace.final_r = r;
  trace.final_params = params_from_threshold(r, l);
  return trace;
}

// `iter,r,rms,score,edges` rows for plotting the rms-vs-threshold curve.
inline std::string trace_to_csv(const ParamTrace& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "iter,r,rms,score,edges\n";
  for (std::size_t k = 0; k < trace.iterations.size(); ++k) {
    const auto& it = trace.iterations[k];
    out << k << ',' << it.r << ',' << it.rms << ',' << it.score << ','
        << it.edges << '\n';
  }
  return out.str();
}

}  // namespace traj

#endif  // TRAJ_PARAM_SELECTION_HPP_
