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

#include "traj/scoring.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "traj/error.hpp"

using traj::evaluate_score;
using traj::Gap;
using traj::gaps_of;
using traj::kGap;
using traj::params_from_threshold;
using traj::Point;
using traj::ScoringParams;
using traj::Side;
using traj::Trajectory;
using traj::validate_monotone;

namespace {

Trajectory make(std::initializer_list<Point> pts) {
  Trajectory t;
  t.points = pts;
  return t;
}

}  // namespace

TEST_CASE("params_from_threshold") {
  const auto p = params_from_threshold(100.0, 4);
  CHECK(p.c == 50.0);
  CHECK(p.delta == Catch::Approx(1.0 / 10050.0).epsilon(1e-12));
  CHECK(p.delta == Catch::Approx(9.9502e-5).epsilon(1e-4));
  CHECK(p.a == Catch::Approx(-4.0 / 10050.0).epsilon(1e-12));

  const auto p2 = params_from_threshold(1.0, 0);
  CHECK(p2.c == 0.5);
  CHECK(p2.delta == Catch::Approx(2.0 / 3.0));
  CHECK(p2.a == 0.0);

  const auto p3 = params_from_threshold(2.0, 1);
  CHECK(p3.c == 1.0);
  CHECK(p3.delta == Catch::Approx(0.2));
  CHECK(p3.a == Catch::Approx(-0.2));

  CHECK_THROWS_AS(params_from_threshold(0.0, 1), traj::ConfigError);
  CHECK_THROWS_AS(params_from_threshold(-5.0, 1), traj::ConfigError);
}

TEST_CASE("delta_score") {
  CHECK(traj::delta_score({1, 2}, {1, 2}, 50.0) == Catch::Approx(0.02));
  CHECK(traj::delta_score({0, 0}, {100, 0}, 50.0) ==
        Catch::Approx(1.0 / 10050.0));
  // strictly positive and decreasing in distance
  double prev = 1.0;
  for (double d = 0.0; d < 1e6; d = d * 2 + 1) {
    const double s = traj::delta_score({0, 0}, {d, 0}, 50.0);
    CHECK(s > 0.0);
    CHECK(s <= prev);
    prev = s;
  }
}

TEST_CASE("matching beats gap extension exactly below the threshold") {
  const auto p = params_from_threshold(100.0, 4);
  CHECK(traj::delta_score({0, 0}, {99.0, 0}, p.c) > p.delta);
  CHECK(traj::delta_score({0, 0}, {101.0, 0}, p.c) < p.delta);
  CHECK(traj::delta_score({0, 0}, {100.0, 0}, p.c) ==
        Catch::Approx(p.delta).epsilon(1e-12));
}

TEST_CASE("gaps_of extracts maximal runs") {
  const std::vector<std::int32_t> m1{kGap, kGap, 3, kGap};
  const auto g1 = gaps_of(m1, Side::kP);
  REQUIRE(g1.size() == 2);
  CHECK(g1[0] == Gap{Side::kP, 0, 2});
  CHECK(g1[1] == Gap{Side::kP, 3, 1});

  const std::vector<std::int32_t> m2{0, 1, 2};
  CHECK(gaps_of(m2, Side::kP).empty());

  const std::vector<std::int32_t> m3{kGap};
  const auto g3 = gaps_of(m3, Side::kQ);
  REQUIRE(g3.size() == 1);
  CHECK(g3[0] == Gap{Side::kQ, 0, 1});
}

TEST_CASE("evaluate_score simple cases") {
  auto params = params_from_threshold(100.0, 0);
  const auto P = make({{0, 0}});

  SECTION("two zero-length edges") {
    const auto Q = make({{0, 0}});
    const std::vector<std::int32_t> alpha{0}, beta{0};
    CHECK(evaluate_score(P, Q, alpha, beta, params) == Catch::Approx(0.04));
  }
  SECTION("one unit gap with a=0") {
    const auto Q = make({{0, 0}, {1000, 0}});
    const std::vector<std::int32_t> alpha{0}, beta{0, kGap};
    CHECK(evaluate_score(P, Q, alpha, beta, params) ==
          Catch::Approx(0.04 + 1.0 / 10050.0));
  }
  SECTION("length mismatch throws") {
    const auto Q = make({{0, 0}});
    const std::vector<std::int32_t> alpha{0, 0}, beta{0};
    CHECK_THROWS_AS(evaluate_score(P, Q, alpha, beta, params),
                    traj::ConfigError);
  }
}

TEST_CASE("evaluate_score equals an independent term-by-term summation") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  std::uniform_int_distribution<int> size_dist(1, 5);
  for (int it = 0; it < 200; ++it) {
    const std::size_t m = static_cast<std::size_t>(size_dist(rng));
    const std::size_t n = static_cast<std::size_t>(size_dist(rng));
    Trajectory P, Q;
    for (std::size_t i = 0; i < m; ++i) P.points.push_back({coord(rng), coord(rng)});
    for (std::size_t j = 0; j < n; ++j) Q.points.push_back({coord(rng), coord(rng)});
    // a random valid-by-construction pair of monotone maps
    std::vector<std::int32_t> alpha(m, kGap), beta(n, kGap);
    std::uniform_int_distribution<int> flip(0, 2);
    std::int32_t next = 0;
    for (std::size_t i = 0; i < m && next < static_cast<std::int32_t>(n); ++i) {
      if (flip(rng) == 0) alpha[i] = next++;
    }
    // beta mirrors alpha's edges, which never crosses them
    for (std::size_t i = 0; i < m; ++i) {
      if (alpha[i] != kGap) beta[static_cast<std::size_t>(alpha[i])] =
          static_cast<std::int32_t>(i);
    }
    REQUIRE(!validate_monotone(alpha, beta, m, n).has_value());

    const auto params = params_from_threshold(20.0, 1);
    // literal re-summation
    double want = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (alpha[i] != kGap)
        want += 1.0 / (params.c +
                       traj::squared_dist(P[i], Q[static_cast<std::size_t>(alpha[i])]));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (beta[j] != kGap)
        want += 1.0 / (params.c +
                       traj::squared_dist(Q[j], P[static_cast<std::size_t>(beta[j])]));
    }
    for (const auto side : {Side::kP, Side::kQ}) {
      const auto& mp = side == Side::kP ? alpha : beta;
      for (const auto& g : gaps_of(mp, side)) {
        want += params.a + params.delta * static_cast<double>(g.length);
      }
    }
    CHECK(evaluate_score(P, Q, alpha, beta, params) ==
          Catch::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("evaluate_score is rigid-motion invariant") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  const auto params = params_from_threshold(30.0, 2);
  for (int it = 0; it < 50; ++it) {
    Trajectory P = make({{coord(rng), coord(rng)},
                         {coord(rng), coord(rng)},
                         {coord(rng), coord(rng)}});
    Trajectory Q = make({{coord(rng), coord(rng)}, {coord(rng), coord(rng)}});
    const std::vector<std::int32_t> alpha{0, kGap, 1}, beta{0, 2};
    const double base = evaluate_score(P, Q, alpha, beta, params);

    const double angle = 1.234, tx = -55.5, ty = 17.25;
    auto rot = [&](Point p) {
      return Point{p.x * std::cos(angle) - p.y * std::sin(angle) + tx,
                   p.x * std::sin(angle) + p.y * std::cos(angle) + ty};
    };
    for (auto& p : P.points) p = rot(p);
    for (auto& p : Q.points) p = rot(p);
    CHECK(evaluate_score(P, Q, alpha, beta, params) ==
          Catch::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("normalize") {
  CHECK(traj::normalize(0.0, 3, 4, 50.0) == 0.0);
  const std::size_t m = 3, n = 4;
  const double c = 50.0;
  CHECK(traj::normalize(static_cast<double>(m + n) / c, m, n, c) ==
        Catch::Approx(1.0));
  // negative scores pass through unclamped
  CHECK(traj::normalize(-1.0, 1, 1, 2.0) == Catch::Approx(-1.0));
}

TEST_CASE("validate_monotone") {
  SECTION("parallel edges are valid") {
    const std::vector<std::int32_t> alpha{0, 1}, beta{0, 1};
    CHECK(!validate_monotone(alpha, beta, 2, 2).has_value());
  }
  SECTION("crossing alpha edges are invalid") {
    const std::vector<std::int32_t> alpha{1, 0}, beta{kGap, kGap};
    CHECK(validate_monotone(alpha, beta, 2, 2).has_value());
  }
  SECTION("opposite-direction pair through distinct indices is valid") {
    // edges (p0,q1) and (q0,p0): index pairs (0,1) and (0,0) do not invert
    const std::vector<std::int32_t> alpha{1}, beta{0, kGap};
    CHECK(!validate_monotone(alpha, beta, 1, 2).has_value());
  }
  SECTION("exactly-opposite edges are exempt") {
    const std::vector<std::int32_t> alpha{0}, beta{0};
    CHECK(!validate_monotone(alpha, beta, 1, 1).has_value());
  }
  SECTION("cross-direction crossing is caught") {
    // alpha: p1 -> q0 gives (1,0); beta: q1 -> p0 gives (0,1); they invert
    const std::vector<std::int32_t> alpha{kGap, 0}, beta{kGap, 0};
    CHECK(validate_monotone(alpha, beta, 2, 2).has_value());
  }
  SECTION("repeated targets are valid in the graph form") {
    const std::vector<std::int32_t> alpha{0, 0, 0}, beta{kGap};
    CHECK(!validate_monotone(alpha, beta, 3, 1).has_value());
  }
  SECTION("out-of-range index is a violation") {
    const std::vector<std::int32_t> alpha{7}, beta{kGap};
    CHECK(validate_monotone(alpha, beta, 1, 1).has_value());
  }
}
