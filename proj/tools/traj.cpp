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

// Command-line front end.
//
//   traj align <A> <B> [--mode M] [--r METERS] [--min-gap-len L]
//        [--tau-factor F] [--auto-params [--r-hat METERS]] [--geo]
//   traj importance <paths...> --algorithm assignment|dtw|dtw-pruned
//        [--r METERS] [--min-gap-len L] [--geo]
//   traj histogram <json> [--bins N] [--log]
//   traj params <A> <B> --r-hat METERS [--discard-frac F] [--c1 F]
//        [--max-iters N]
//
// All indices in the output are 0-based. Exit codes: 1 I/O error, 2 parse
// error, 3 invalid configuration.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "traj/traj.hpp"

namespace {

using nlohmann::json;

struct RunConfig {
  std::string mode = "global";
  double r = 100.0;
  int min_gap_len = 4;
  std::optional<double> tau_factor;
  bool auto_params = false;
  std::optional<double> r_hat;
  bool geo = false;
};

traj::Trajectory load_input(const std::string& path, bool geo,
                            const std::optional<traj::GeoPoint>& origin) {
  return traj::load_trajectory(
      path, geo ? traj::TrajectoryFormat::kCsvGeo : traj::TrajectoryFormat::kCsvXy,
      origin);
}

// shared projection origin so that inter-file distances are meaningful
std::pair<traj::Trajectory, traj::Trajectory> load_pair(const std::string& a,
                                                        const std::string& b,
                                                        bool geo) {
  std::optional<traj::GeoPoint> origin;
  if (geo) {
    const auto rows = traj::load_geo_points(a);
    origin = rows.front();
  }
  return {load_input(a, geo, origin), load_input(b, geo, origin)};
}

double bbox_diagonal(const traj::Trajectory& a, const traj::Trajectory& b) {
  double lox = a[0].x, hix = a[0].x, loy = a[0].y, hiy = a[0].y;
  for (const auto* t : {&a, &b}) {
    for (const auto& p : t->points) {
      lox = std::min(lox, p.x);
      hix = std::max(hix, p.x);
      loy = std::min(loy, p.y);
      hiy = std::max(hiy, p.y);
    }
  }
  return traj::euclidean_dist({lox, loy}, {hix, hiy});
}

json params_to_json(const traj::ScoringParams& p) {
  json out{{"a", p.a},
           {"delta", p.delta},
           {"c", p.c},
           {"r", p.r},
           {"l", p.min_gap_len}};
  if (p.tau) out["tau"] = *p.tau;
  return out;
}

json gaps_to_json(const std::vector<traj::Gap>& gaps) {
  json out = json::array();
  for (const auto& g : gaps) {
    out.push_back(json{{"side", g.side == traj::Side::kP ? "P" : "Q"},
                       {"start", g.start},
                       {"len", g.length}});
  }
  return out;
}

json trace_to_json(const traj::ParamTrace& trace) {
  json its = json::array();
  for (std::size_t k = 0; k < trace.iterations.size(); ++k) {
    const auto& it = trace.iterations[k];
    its.push_back(json{{"iter", k},
                       {"r", it.r},
                       {"rms", it.rms},
                       {"score", it.score},
                       {"edges", it.edges}});
  }
  return json{{"converged", trace.converged},
              {"final_r", trace.final_r},
              {"iterations", its}};
}

json int_map_to_json(const std::vector<std::int32_t>& map) {
  json out = json::array();
  for (const auto v : map) {
    if (v >= 0) {
      out.push_back(v);
    } else {
      out.push_back(nullptr);  // gap or unaligned; `gaps` disambiguates
    }
  }
  return out;
}

json sc_map_to_json(const std::vector<std::optional<traj::SegmentTarget>>& map) {
  json out = json::array();
  for (const auto& t : map) {
    if (t) {
      out.push_back(json{{"edge", t->edge}, {"t", t->t}});
    } else {
      out.push_back(nullptr);
    }
  }
  return out;
}

void append_edges(json& edges, const char* side,
                  const std::vector<std::int32_t>& map,
                  const traj::Trajectory& from, const traj::Trajectory& to) {
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] < 0) continue;
    const auto j = static_cast<std::size_t>(map[i]);
    edges.push_back(json{{"side", side},
                         {"from", i},
                         {"to", j},
                         {"dist", traj::euclidean_dist(from[i], to[j])}});
  }
}

void append_sc_edges(json& edges, const char* side,
                     const std::vector<std::optional<traj::SegmentTarget>>& map,
                     const traj::Trajectory& from) {
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!map[i]) continue;
    edges.push_back(
        json{{"side", side},
             {"from", i},
             {"to", map[i]->edge},
             {"dist", traj::euclidean_dist(from[i], map[i]->point)}});
  }
}

int cmd_align(const std::string& file_a, const std::string& file_b,
              const RunConfig& cfg) {
  const auto [P, Q] = load_pair(file_a, file_b, cfg.geo);

  json out;
  out["mode"] = cfg.mode;

  traj::ScoringParams params;
  if (cfg.auto_params) {
    const double r_hat = cfg.r_hat.value_or(bbox_diagonal(P, Q));
    const auto trace = traj::select_params(P, Q, r_hat, cfg.min_gap_len);
    params = trace.final_params;
    out["param_trace"] = trace_to_json(trace);
  } else {
    params = traj::params_from_threshold(cfg.r, cfg.min_gap_len);
  }

  json edges = json::array();
  if (cfg.mode == "global") {
    const auto res = traj::global_align(P, Q, params);
    out["score"] = res.score;
    out["normalized"] = res.normalized;
    out["alpha"] = int_map_to_json(res.alpha);
    out["beta"] = int_map_to_json(res.beta);
    out["gaps"] = gaps_to_json(res.gaps);
    append_edges(edges, "P", res.alpha, P, Q);
    append_edges(edges, "Q", res.beta, Q, P);
  } else if (cfg.mode == "local") {
    params.tau = cfg.tau_factor.value_or(1.5) * params.delta;
    const auto res = traj::local_align(P, Q, params);
    out["score"] = res.score;
    out["normalized"] = res.normalized;
    out["alpha"] = int_map_to_json(res.alpha);
    out["beta"] = int_map_to_json(res.beta);
    out["gaps"] = gaps_to_json(res.gaps);
    append_edges(edges, "P", res.alpha, P, Q);
    append_edges(edges, "Q", res.beta, Q, P);
  } else if (cfg.mode == "semicontinuous") {
    const auto res = traj::semicontinuous_align(P, Q, params);
    out["score"] = res.score;
    out["normalized"] = res.normalized;
    out["alpha"] = sc_map_to_json(res.alpha);
    out["beta"] = sc_map_to_json(res.beta);
    out["gaps"] = gaps_to_json(res.gaps);
    append_sc_edges(edges, "P", res.alpha, P);
    append_sc_edges(edges, "Q", res.beta, Q);
  } else if (cfg.mode == "semicontinuous-local") {
    params.tau = cfg.tau_factor.value_or(2.0) * params.delta;
    const auto res = traj::local_align_semicontinuous(P, Q, params);
    out["score"] = res.score;
    out["normalized"] = res.normalized;
    out["alpha"] = sc_map_to_json(res.alpha);
    out["beta"] = sc_map_to_json(res.beta);
    out["gaps"] = gaps_to_json(res.gaps);
    append_sc_edges(edges, "P", res.alpha, P);
    append_sc_edges(edges, "Q", res.beta, Q);
  } else if (cfg.mode == "dtw" || cfg.mode == "dtw-pruned" ||
             cfg.mode == "seqalign") {
    traj::CorrespondenceSet cs;
    if (cfg.mode == "dtw") {
      cs = traj::dtw(P, Q);
      out["normalized"] =
          cs.pairs.empty()
              ? 0.0
              : cs.total_cost / static_cast<double>(cs.pairs.size());
    } else if (cfg.mode == "dtw-pruned") {
      cs = traj::dtw_pruned(P, Q, params.r);
      out["normalized"] =
          cs.pairs.empty()
              ? 0.0
              : cs.total_cost / static_cast<double>(cs.pairs.size());
    } else {
      cs = traj::seq_align(P, Q, params);
      out["normalized"] =
          traj::normalize(cs.total_cost, P.size(), Q.size(), params.c);
    }
    out["score"] = cs.total_cost;
    // first partner per point, null when uncovered
    std::vector<std::int32_t> alpha(P.size(), traj::kGap),
        beta(Q.size(), traj::kGap);
    for (const auto& [i, j] : cs.pairs) {
      if (alpha[static_cast<std::size_t>(i)] == traj::kGap) alpha[i] = j;
      if (beta[static_cast<std::size_t>(j)] == traj::kGap) beta[j] = i;
    }
    out["alpha"] = int_map_to_json(alpha);
    out["beta"] = int_map_to_json(beta);
    out["gaps"] = cfg.mode == "dtw"
                      ? json::array()
                      : gaps_to_json([&] {
                          auto gaps = traj::gaps_of(alpha, traj::Side::kP);
                          const auto qg = traj::gaps_of(beta, traj::Side::kQ);
                          gaps.insert(gaps.end(), qg.begin(), qg.end());
                          return gaps;
                        }());
    for (const auto& [i, j] : cs.pairs) {
      edges.push_back(
          json{{"side", "pair"},
               {"from", i},
               {"to", j},
               {"dist", traj::euclidean_dist(P[static_cast<std::size_t>(i)],
                                             Q[static_cast<std::size_t>(j)])}});
    }
  } else {
    throw traj::ConfigError("unknown mode: " + cfg.mode);
  }
  out["params"] = params_to_json(params);
  out["edge_distances"] = edges;
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_importance(const std::vector<std::string>& paths,
                   const std::string& algorithm, const RunConfig& cfg) {
  if (paths.size() < 2) {
    throw traj::ConfigError("importance requires at least 2 trajectories");
  }
  traj::Method method;
  if (algorithm == "assignment") {
    method = traj::Method::kAssignment;
  } else if (algorithm == "dtw") {
    method = traj::Method::kDtw;
  } else if (algorithm == "dtw-pruned") {
    method = traj::Method::kDtwPruned;
  } else {
    throw traj::ConfigError("unknown algorithm: " + algorithm);
  }
  std::optional<traj::GeoPoint> origin;
  if (cfg.geo) {
    origin = traj::load_geo_points(paths.front()).front();
  }
  std::vector<traj::Trajectory> trajs;
  trajs.reserve(paths.size());
  for (const auto& p : paths) trajs.push_back(load_input(p, cfg.geo, origin));

  const auto params = traj::params_from_threshold(cfg.r, cfg.min_gap_len);
  const auto results = traj::all_pairs(trajs, method, params);
  const auto map = traj::importance(trajs, results, method);
  std::cout << traj::importance_to_csv(trajs, map);
  return 0;
}

int cmd_histogram(const std::string& json_path, std::size_t bins,
                  bool log_scale) {
  std::ifstream in(json_path);
  if (!in) {
    throw traj::IoError("cannot open file: " + json_path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw traj::ParseError(json_path + ": " + e.what());
  }
  if (!doc.contains("edge_distances") || !doc["edge_distances"].is_array()) {
    throw traj::ParseError(json_path + ": no edge_distances array");
  }
  std::vector<double> dists;
  for (const auto& e : doc["edge_distances"]) {
    if (!e.contains("dist") || !e["dist"].is_number()) {
      throw traj::ParseError(json_path + ": malformed edge_distances entry");
    }
    dists.push_back(e["dist"].get<double>());
  }
  if (dists.empty()) {
    throw traj::ConfigError("alignment has no edges to histogram");
  }
  const auto h = traj::distance_histogram(dists, bins, log_scale);
  std::cout << traj::histogram_to_csv(h);
  return 0;
}

int cmd_params(const std::string& file_a, const std::string& file_b,
               double r_hat, const traj::SelectOptions& options, int l) {
  const auto [P, Q] = load_pair(file_a, file_b, false);
  const auto trace = traj::select_params(P, Q, r_hat, l, options);
  json out;
  out["r_hat"] = r_hat;
  out["l"] = l;
  out["options"] = json{{"discard_frac", options.discard_frac},
                        {"c1", options.c1},
                        {"rel_tol", options.rel_tol},
                        {"max_iters", options.max_iters}};
  if (options.r_min) out["options"]["r_min"] = *options.r_min;
  out["trace"] = trace_to_json(trace);
  out["final_params"] = params_to_json(trace.final_params);
  std::cout << out.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory similarity via gap-aware asymmetric assignment"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string file_a, file_b, json_path, algorithm;
  std::vector<std::string> paths;
  std::size_t bins = 20;
  bool log_scale = false;
  double r_hat = 0.0;
  int params_l = 4;
  traj::SelectOptions options;

  auto* align = app.add_subcommand("align", "Align two trajectory files");
  align->add_option("A", file_a, "first trajectory file")->required();
  align->add_option("B", file_b, "second trajectory file")->required();
  align->add_option("--mode", cfg.mode,
                    "global|local|semicontinuous|semicontinuous-local|dtw|"
                    "dtw-pruned|seqalign");
  align->add_option("--r", cfg.r, "distance threshold in meters");
  align->add_option("--min-gap-len", cfg.min_gap_len, "minimum gap length l");
  double tau_factor = 0.0;
  auto* tau_opt = align->add_option("--tau-factor", tau_factor,
                                    "tau as a multiple of delta (local modes)");
  align->add_flag("--auto-params", cfg.auto_params,
                  "infer r iteratively before aligning");
  double r_hat_align = 0.0;
  auto* r_hat_opt = align->add_option("--r-hat", r_hat_align,
                                      "initial threshold guess for "
                                      "--auto-params");
  align->add_flag("--geo", cfg.geo, "inputs are lat/lon CSV");

  auto* imp = app.add_subcommand("importance",
                                 "Per-point correspondence counts over a "
                                 "dataset");
  imp->add_option("paths", paths, "trajectory files (two or more)")
      ->required()
      ->expected(-2);
  imp->add_option("--algorithm", algorithm, "assignment|dtw|dtw-pruned")
      ->required();
  imp->add_option("--r", cfg.r, "distance threshold in meters");
  imp->add_option("--min-gap-len", cfg.min_gap_len, "minimum gap length l");
  imp->add_flag("--geo", cfg.geo, "inputs are lat/lon CSV");

  auto* hist = app.add_subcommand("histogram",
                                  "Bin the edge distances of an align run");
  hist->add_option("json", json_path, "JSON document produced by align")
      ->required();
  hist->add_option("--bins", bins, "number of bins");
  hist->add_flag("--log", log_scale, "log10-scaled bins");

  auto* par = app.add_subcommand("params", "Iterative threshold selection");
  par->add_option("A", file_a, "first trajectory file")->required();
  par->add_option("B", file_b, "second trajectory file")->required();
  par->add_option("--r-hat", r_hat, "initial threshold guess in meters")
      ->required();
  par->add_option("--discard-frac", options.discard_frac,
                  "fraction of the largest distances to drop");
  par->add_option("--c1", options.c1, "threshold = c1 * rms");
  par->add_option("--max-iters", options.max_iters, "iteration cap");

  try {
    app.parse(argc, argv);

    if (align->parsed()) {
      if (*tau_opt) cfg.tau_factor = tau_factor;
      if (*r_hat_opt) cfg.r_hat = r_hat_align;
      if (cfg.tau_factor && cfg.mode != "local" &&
          cfg.mode != "semicontinuous-local") {
        throw traj::ConfigError("--tau-factor applies to local modes only");
      }
      if (cfg.r_hat && !cfg.auto_params) {
        throw traj::ConfigError("--r-hat requires --auto-params");
      }
      if (cfg.auto_params &&
          (cfg.mode == "dtw" || cfg.mode == "dtw-pruned" ||
           cfg.mode == "seqalign")) {
        throw traj::ConfigError("--auto-params applies to assignment modes");
      }
      if (!cfg.auto_params && !(cfg.r > 0.0)) {
        throw traj::ConfigError("--r must be positive");
      }
      return cmd_align(file_a, file_b, cfg);
    }
    if (imp->parsed()) {
      return cmd_importance(paths, algorithm, cfg);
    }
    if (hist->parsed()) {
      return cmd_histogram(json_path, bins, log_scale);
    }
    if (par->parsed()) {
      return cmd_params(file_a, file_b, r_hat, options, params_l);
    }
    return 3;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const traj::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const traj::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const traj::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
