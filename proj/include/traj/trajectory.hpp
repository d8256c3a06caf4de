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

#ifndef TRAJ_TRAJECTORY_HPP_
#define TRAJ_TRAJECTORY_HPP_

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "traj/error.hpp"
#include "traj/geometry.hpp"

namespace traj {

// WGS84 position in degrees. The timestamp is carried through to the
// projected trajectory but never used by any scoring function.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  std::optional<double> time;
};

// An ordered sequence of planar sample points. The order is significant and
// immutable once built; coordinates must be finite.
struct Trajectory {
  std::string id;
  std::vector<Point> points;
  std::vector<double> times;  // empty, or one entry per point

  std::size_t size() const { return points.size(); }
  const Point& operator[](std::size_t i) const { return points[i]; }
};

inline constexpr double kEarthRadiusMeters = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;

// Local equirectangular projection around `origin`. Accurate to well under
// 0.5% at city scale, which is all the meter-valued thresholds need.
inline Point project_geo_point(const GeoPoint& g, const GeoPoint& origin) {
  constexpr double kDegToRad = kPi / 180.0;
  const double x = kEarthRadiusMeters * (g.lon - origin.lon) * kDegToRad *
                   std::cos(origin.lat * kDegToRad);
  const double y = kEarthRadiusMeters * (g.lat - origin.lat) * kDegToRad;
  return Point{x, y};
}

inline Trajectory project_geo(std::span<const GeoPoint> points,
                              const GeoPoint& origin) {
  if (points.empty()) {
    throw ConfigError("project_geo: empty input");
  }
  Trajectory out;
  out.points.reserve(points.size());
  bool any_time = false;
  for (const GeoPoint& g : points) {
    out.points.push_back(project_geo_point(g, origin));
    if (g.time) any_time = true;
  }
  if (any_time) {
    out.times.reserve(points.size());
    for (const GeoPoint& g : points) out.times.push_back(g.time.value_or(0.0));
  }
  return out;
}

// Origin defaults to the first point.
inline Trajectory project_geo(std::span<const GeoPoint> points) {
  if (points.empty()) {
    throw ConfigError("project_geo: empty input");
  }
  return project_geo(points, points.front());
}

enum class TrajectoryFormat { kCsvXy, kCsvGeo };

namespace detail {

inline bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

struct CsvRow {
  std::optional<double> time;
  double a = 0.0;  // x or lat
  double b = 0.0;  // y or lon
};

// Numeric rows of a 2- or 3-column CSV file. One leading non-numeric header
// row is tolerated; every other malformed row is an error with its line
// number.
inline std::vector<CsvRow> read_csv_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open file: " + path.string());
  }
  std::vector<CsvRow> rows;
  std::string line;
  std::size_t line_no = 0;
  int field_count = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv(line);
    if (!sv.empty() && sv.back() == '\r') sv.remove_suffix(1);
    if (sv.empty()) continue;

    const auto fields = split_fields(sv);
    std::vector<double> vals(fields.size());
    bool ok = fields.size() >= 2 && fields.size() <= 3;
    for (std::size_t k = 0; ok && k < fields.size(); ++k) {
      ok = parse_double(fields[k], vals[k]);
    }
    if (!ok) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": malformed row");
    }
    header_allowed = false;
    if (field_count == 0) {
      field_count = static_cast<int>(fields.size());
    } else if (field_count != static_cast<int>(fields.size())) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": inconsistent column count");
    }
    CsvRow row;
    if (field_count == 3) {
      row.time = vals[0];
      row.a = vals[1];
      row.b = vals[2];
    } else {
      row.a = vals[0];
      row.b = vals[1];
    }
    rows.push_back(row);
  }
  if (rows.empty()) {
    throw ParseError(path.string() + ": no valid rows");
  }
  return rows;
}

}  // namespace detail

// Raw geodetic rows of a csv-geo file, range-checked.
inline std::vector<GeoPoint> load_geo_points(const std::filesystem::path& path) {
  const auto rows = detail::read_csv_rows(path);
  std::vector<GeoPoint> geo;
  geo.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.a < -90.0 || row.a > 90.0 || row.b < -180.0 || row.b > 180.0) {
      throw ParseError(path.string() + ": lat/lon out of range");
    }
    geo.push_back(GeoPoint{row.a, row.b, row.time});
  }
  return geo;
}

// Reads one trajectory from a CSV file.
//
// csv-xy rows are `x,y` or `t,x,y` with coordinates in meters; csv-geo rows
// are `lat,lon` or `t,lat,lon`, projected against `origin` when given and
// against the file's first point otherwise. Consecutive duplicate points are
// kept as-is.
inline Trajectory load_trajectory(
    const std::filesystem::path& path, TrajectoryFormat format,
    const std::optional<GeoPoint>& origin = std::nullopt) {
  if (format == TrajectoryFormat::kCsvGeo) {
    const auto geo = load_geo_points(path);
    Trajectory out =
        origin ? project_geo(geo, *origin) : project_geo(geo, geo.front());
    out.id = path.stem().string();
    return out;
  }
  const auto rows = detail::read_csv_rows(path);
  Trajectory out;
  out.id = path.stem().string();
  out.points.reserve(rows.size());
  const bool has_time = rows.front().time.has_value();
  for (const auto& row : rows) {
    out.points.push_back(Point{row.a, row.b});
    if (has_time) out.times.push_back(row.time.value_or(0.0));
  }
  return out;
}

}  // namespace traj

#endif  // TRAJ_TRAJECTORY_HPP_
