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

#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "traj/traj.hpp"

namespace {

using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(TRAJ_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WEXITSTATUS(status);
  return r;
}

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

std::vector<std::int32_t> parse_map(const json& arr) {
  std::vector<std::int32_t> out;
  for (const auto& v : arr) {
    out.push_back(v.is_null() ? traj::kGap : v.get<std::int32_t>());
  }
  return out;
}

const std::string kIdentical = "0,0\n50,0\n100,0\n";

}  // namespace

TEST_CASE("align on identical files reports normalized 1 and no gaps") {
  const auto a = write_temp("cli_a.csv", kIdentical);
  const auto b = write_temp("cli_b.csv", kIdentical);
  const auto r = run_cli("align " + a.string() + " " + b.string());
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["mode"] == "global");
  CHECK(doc["normalized"].get<double>() == Catch::Approx(1.0));
  CHECK(doc["gaps"].empty());
  // documented defaults
  CHECK(doc["params"]["r"].get<double>() == 100.0);
  CHECK(doc["params"]["l"].get<int>() == 4);
  CHECK(!doc["params"].contains("tau"));
}

TEST_CASE("flag-free tau defaults are 1.5 delta and 2 delta") {
  const auto a = write_temp("cli_tau_a.csv", kIdentical);
  const auto b = write_temp("cli_tau_b.csv", kIdentical);
  const auto local = run_cli("align " + a.string() + " " + b.string() +
                             " --mode local");
  REQUIRE(local.exit_code == 0);
  const json dl = json::parse(local.out);
  const double delta = dl["params"]["delta"].get<double>();
  CHECK(dl["params"]["tau"].get<double>() == Catch::Approx(1.5 * delta));

  const auto sc = run_cli("align " + a.string() + " " + b.string() +
                          " --mode semicontinuous-local");
  REQUIRE(sc.exit_code == 0);
  const json ds = json::parse(sc.out);
  CHECK(ds["params"]["tau"].get<double>() ==
        Catch::Approx(2.0 * ds["params"]["delta"].get<double>()));
}

TEST_CASE("local mode on all-far inputs emits score 0 and all-null maps") {
  const auto a = write_temp("cli_far_a.csv", "0,0\n10,0\n20,0\n");
  const auto b = write_temp("cli_far_b.csv", "9000,0\n9010,0\n9020,0\n");
  const auto r = run_cli("align " + a.string() + " " + b.string() +
                         " --mode local --r 1 --min-gap-len 10");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["score"].get<double>() == 0.0);
  for (const auto& v : doc["alpha"]) CHECK(v.is_null());
  for (const auto& v : doc["beta"]) CHECK(v.is_null());
}

TEST_CASE("emitted JSON re-evaluates to the reported score") {
  const auto a = write_temp("cli_re_a.csv", "0,0\n40,5\n80,0\n120,8\n160,0\n");
  const auto b = write_temp("cli_re_b.csv", "2,1\n38,4\n81,2\n500,400\n162,1\n");
  const auto P = traj::load_trajectory(a, traj::TrajectoryFormat::kCsvXy);
  const auto Q = traj::load_trajectory(b, traj::TrajectoryFormat::kCsvXy);

  SECTION("global") {
    const auto r = run_cli("align " + a.string() + " " + b.string() +
                           " --r 50 --min-gap-len 1");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    auto params = traj::params_from_threshold(50.0, 1);
    const double re = traj::evaluate_score(P, Q, parse_map(doc["alpha"]),
                                           parse_map(doc["beta"]), params);
    CHECK(re == Catch::Approx(doc["score"].get<double>()).epsilon(1e-9));
  }
  SECTION("dtw: distances re-sum to the cost") {
    const auto r = run_cli("align " + a.string() + " " + b.string() +
                           " --mode dtw");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    double sum = 0.0;
    for (const auto& e : doc["edge_distances"]) sum += e["dist"].get<double>();
    CHECK(sum == Catch::Approx(doc["score"].get<double>()).epsilon(1e-9));
  }
  SECTION("semicontinuous: realized targets re-evaluate") {
    const auto r = run_cli("align " + a.string() + " " + b.string() +
                           " --mode semicontinuous --r 50 --min-gap-len 1");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    const auto params = traj::params_from_threshold(50.0, 1);
    double re = 0.0;
    auto add_side = [&](const json& arr, const traj::Trajectory& from,
                        const traj::Trajectory& on) {
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (arr[i].is_null()) continue;
        const auto e = arr[i]["edge"].get<std::size_t>();
        const double t = arr[i]["t"].get<double>();
        const traj::Point s0 = on[e];
        const traj::Point s1 = on[std::min(e + 1, on.size() - 1)];
        const traj::Point target{s0.x + t * (s1.x - s0.x),
                                 s0.y + t * (s1.y - s0.y)};
        re += traj::delta_score(from[i], target, params.c);
      }
    };
    add_side(doc["alpha"], P, Q);
    add_side(doc["beta"], Q, P);
    for (const auto& g : doc["gaps"]) {
      re += params.a + params.delta * g["len"].get<double>();
    }
    CHECK(re == Catch::Approx(doc["score"].get<double>()).epsilon(1e-9));
  }
}

TEST_CASE("byte-identical reruns") {
  const auto a = write_temp("cli_rep_a.csv", "0,0\n40,5\n80,0\n");
  const auto b = write_temp("cli_rep_b.csv", "2,1\n38,4\n81,2\n");
  for (const std::string mode :
       {"global", "local", "semicontinuous", "dtw", "seqalign"}) {
    const std::string cmd =
        "align " + a.string() + " " + b.string() + " --mode " + mode;
    const auto r1 = run_cli(cmd);
    const auto r2 = run_cli(cmd);
    REQUIRE(r1.exit_code == 0);
    CHECK(r1.out == r2.out);
  }
}

TEST_CASE("exit codes: io 1, parse 2, config 3") {
  const auto good = write_temp("cli_ok.csv", kIdentical);
  CHECK(run_cli("align /does/not/exist.csv " + good.string()).exit_code == 1);
  const auto bad = write_temp("cli_bad.csv", "1,2\nnot,numbers\n");
  CHECK(run_cli("align " + bad.string() + " " + good.string()).exit_code == 2);
  CHECK(run_cli("align " + good.string() + " " + good.string() +
                " --mode nonsense")
            .exit_code == 3);
  CHECK(run_cli("align " + good.string() + " " + good.string() + " --r -5")
            .exit_code == 3);
  CHECK(run_cli("align " + good.string()).exit_code == 3);  // missing arg
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("geo ingestion projects both files against file A's first point") {
  const auto a = write_temp("cli_geo_a.csv", "0.0,10.0\n0.0,10.001\n");
  const auto b = write_temp("cli_geo_b.csv", "0.0,10.0005\n0.0,10.0015\n");
  const auto r = run_cli("align " + a.string() + " " + b.string() +
                         " --geo --r 100");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  // B's points sit ~55.6 m ahead of A's in the shared frame; with per-file
  // origins every edge distance would collapse to ~0 instead
  CHECK(doc["gaps"].empty());
  REQUIRE(!doc["edge_distances"].empty());
  for (const auto& e : doc["edge_distances"]) {
    CHECK(e["dist"].get<double>() > 30.0);
    CHECK(e["dist"].get<double>() < 100.0);
  }
}

TEST_CASE("histogram command consumes align output") {
  const auto a = write_temp("cli_h_a.csv", "0,0\n40,5\n80,0\n120,8\n");
  const auto b = write_temp("cli_h_b.csv", "2,1\n38,4\n81,2\n121,9\n");
  const auto r = run_cli("align " + a.string() + " " + b.string() + " --r 50");
  REQUIRE(r.exit_code == 0);
  const auto doc_path = write_temp("cli_h.json", r.out);
  const auto h = run_cli("histogram " + doc_path.string() + " --bins 4");
  REQUIRE(h.exit_code == 0);
  CHECK(h.out.rfind("bin_lo,bin_hi,count,is_mean_bin,is_rms_bin\n", 0) == 0);
  // counts conserve the number of edges
  const json doc = json::parse(r.out);
  std::size_t total = 0;
  std::istringstream in(h.out);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto c1 = line.find(',', line.find(',') + 1);
    total += std::stoul(line.substr(c1 + 1));
  }
  CHECK(total == doc["edge_distances"].size());

  CHECK(run_cli("histogram /does/not/exist.json").exit_code == 1);
  const auto not_json = write_temp("cli_h_bad.json", "{{{");
  CHECK(run_cli("histogram " + not_json.string()).exit_code == 2);
}

TEST_CASE("importance command emits the per-point CSV") {
  const auto a = write_temp("cli_imp_a.csv", kIdentical);
  const auto b = write_temp("cli_imp_b.csv", kIdentical);
  const auto r = run_cli("importance " + a.string() + " " + b.string() +
                         " --algorithm assignment");
  REQUIRE(r.exit_code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "trajectory_id,point_index,x,y,count");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    CHECK(line.back() == '1');  // identical pair: every count is 1
    ++rows;
  }
  CHECK(rows == 6);

  const auto d = run_cli("importance " + a.string() + " " + b.string() +
                         " --algorithm dtw");
  REQUIRE(d.exit_code == 0);
  std::istringstream din(d.out);
  std::getline(din, line);
  while (std::getline(din, line)) CHECK(line.back() >= '1');

  // far-apart pair with l=0: the all-gap optimum zeroes every count
  const auto fa = write_temp("cli_imp_far_a.csv", "0,0\n50,0\n");
  const auto fb = write_temp("cli_imp_far_b.csv", "9000,0\n9050,0\n");
  const auto far = run_cli("importance " + fa.string() + " " + fb.string() +
                           " --algorithm assignment --min-gap-len 0");
  REQUIRE(far.exit_code == 0);
  std::istringstream fin(far.out);
  std::getline(fin, line);
  while (std::getline(fin, line)) CHECK(line.back() == '0');

  CHECK(run_cli("importance " + a.string() + " --algorithm dtw").exit_code ==
        3);
}

TEST_CASE("params command emits a self-consistent trace") {
  const auto a = write_temp(
      "cli_p_a.csv", [] {
        std::string s;
        for (int k = 0; k < 30; ++k)
          s += std::to_string(20 * k) + ",0\n";
        return s;
      }());
  const auto b = write_temp(
      "cli_p_b.csv", [] {
        std::string s;
        for (int k = 0; k < 30; ++k)
          s += std::to_string(20 * k) + "," + std::to_string(3 + k % 5) + "\n";
        return s;
      }());
  const auto r = run_cli("params " + a.string() + " " + b.string() +
                         " --r-hat 500");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  const auto& its = doc["trace"]["iterations"];
  REQUIRE(!its.empty());
  for (std::size_t k = 0; k + 1 < its.size(); ++k) {
    const double expect = std::max(doc["options"]["c1"].get<double>() *
                                       its[k]["rms"].get<double>(),
                                   1e-6);
    CHECK(its[k + 1]["r"].get<double>() == expect);
  }
  CHECK(doc["final_params"]["r"].get<double>() ==
        doc["trace"]["final_r"].get<double>());
}

TEST_CASE("auto-params embeds the trace in align output") {
  const auto a = write_temp("cli_ap_a.csv", [] {
    std::string s;
    for (int k = 0; k < 25; ++k) s += std::to_string(20 * k) + ",0\n";
    return s;
  }());
  const auto b = write_temp("cli_ap_b.csv", [] {
    std::string s;
    for (int k = 0; k < 25; ++k)
      s += std::to_string(20 * k) + "," + std::to_string(2 + k % 4) + "\n";
    return s;
  }());
  const auto r = run_cli("align " + a.string() + " " + b.string() +
                         " --auto-params --r-hat 800");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc.contains("param_trace"));
  CHECK(doc["param_trace"]["converged"].get<bool>());
  CHECK(doc["params"]["r"].get<double>() ==
        doc["param_trace"]["final_r"].get<double>());
  // r-hat without auto-params is a config error
  CHECK(run_cli("align " + a.string() + " " + b.string() + " --r-hat 5")
            .exit_code == 3);
}
