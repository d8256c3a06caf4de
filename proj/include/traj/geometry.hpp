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

#ifndef TRAJ_GEOMETRY_HPP_
#define TRAJ_GEOMETRY_HPP_

#include <cmath>

namespace traj {

// A planar sample point; coordinates are meters in a local frame.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }

inline double squared_dist(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double euclidean_dist(Point a, Point b) {
  return std::sqrt(squared_dist(a, b));
}

// Closest point of p on the segment [s0, s1].
struct SegmentProjection {
  double dist = 0.0;  // ||p - closest||
  Point closest;      // s0 + t * (s1 - s0)
  double t = 0.0;     // clamped to [0, 1]; 0 for a degenerate segment
};

inline SegmentProjection point_segment_dist(Point p, Point s0, Point s1) {
  const double vx = s1.x - s0.x;
  const double vy = s1.y - s0.y;
  const double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((p.x - s0.x) * vx + (p.y - s0.y) * vy) / len2;
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
  }
  // clamped parameters hit the vertices exactly
  const Point closest = t <= 0.0 ? s0
                        : t >= 1.0 ? s1
                                   : Point{s0.x + t * vx, s0.y + t * vy};
  return SegmentProjection{euclidean_dist(p, closest), closest, t};
}

}  // namespace traj

#endif  // TRAJ_GEOMETRY_HPP_
