// Copyright 2026 The vlcsteer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vlcsteer {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
};

/// Beam orientation in degrees. alpha is the elevation (270 points straight
/// down), beta the azimuth measured from +x towards +y.
struct SteeringAngles {
  double alpha_deg = 270.0;
  double beta_deg = 0.0;

  friend bool operator==(const SteeringAngles&, const SteeringAngles&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
  friend auto operator<=>(const Point2&, const Point2&) = default;
};

/// Convex hull in counterclockwise order. One vertex for a point set, two for
/// a collinear set.
struct Hull2D {
  std::vector<Point2> vertices;

  bool is_point() const { return vertices.size() == 1; }
  bool is_segment() const { return vertices.size() == 2; }
};

/// Exact for multiples of 90 degrees, so nadir orientations carry no
/// rounding residue in x and y.
double cos_deg(double deg);
double sin_deg(double deg);

Vec3 orientation_from_angles(const SteeringAngles& angles);

struct LinkGeometry {
  double cos_phi = 0.0;    // emission angle at the transmitter
  double cos_theta = 0.0;  // incidence angle at the receiver
  double distance = 0.0;
};

/// Throws std::domain_error when the two positions coincide.
LinkGeometry link_geometry(const Vec3& tx_pos, const Vec3& tx_orient, const Vec3& rx_pos,
                           const Vec3& rx_orient);

/// Graham scan. Duplicates are removed and collinear points dropped, so a
/// collinear input returns its two extreme points. Throws std::domain_error
/// on empty input.
Hull2D convex_hull(std::span<const Point2> points);

/// Euclidean distance from p to the hull (0 inside or on the boundary).
double distance_to_hull(const Hull2D& hull, const Point2& p);

/// Search limits for the angle grid.
struct GridLimits {
  double alpha_min_deg = 200.0;
  double alpha_max_deg = 340.0;
  double delta_deg = 2.0;
  std::vector<double> gammas;  // directivity indices, ascending
};

/// Discretized (alpha, beta, gamma) search space. The mask lives on the
/// (alpha, beta) plane; every gamma is searched for an unmasked direction.
/// Flattened cell index: (ia * betas.size() + ib) * gammas.size() + ig.
struct AngleGrid {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> gammas;
  std::vector<bool> mask;  // size alphas.size() * betas.size()
  double delta_deg = 0.0;

  std::size_t direction_count() const { return alphas.size() * betas.size(); }
  std::size_t cell_count() const { return direction_count() * gammas.size(); }
  std::size_t masked_direction_count() const;
  double mask_ratio() const;

  std::size_t direction_index(std::size_t ia, std::size_t ib) const { return ia * betas.size() + ib; }
  std::size_t flat_index(std::size_t ia, std::size_t ib, std::size_t ig) const {
    return direction_index(ia, ib) * gammas.size() + ig;
  }

  struct Cell {
    std::size_t alpha_index;
    std::size_t beta_index;
    std::size_t gamma_index;
  };
  Cell unflatten(std::size_t flat) const;

  SteeringAngles angles_at(std::size_t direction) const {
    return {alphas[direction / betas.size()], betas[direction % betas.size()]};
  }
};

/// Unmasked grid covering the full steering range. Throws std::domain_error
/// for a non-positive step, an empty alpha range or an empty gamma list.
AngleGrid full_grid(const GridLimits& limits);

/// Grid masked to the directions whose beam axis meets the user plane inside
/// the hull, dilated by one grid step measured on the plane. Axes that never
/// reach the plane stay masked out. Throws std::domain_error when the plane
/// is not below the transmitter.
AngleGrid reduced_grid(const Hull2D& hull, const Vec3& tx_pos, double user_plane_z,
                       const GridLimits& limits);

/// Builds the reduced grid for a set of user positions, or the full grid when
/// their heights differ by more than `height_tolerance_m`.
AngleGrid search_grid_for_users(std::span<const Vec3> user_positions, const Vec3& tx_pos,
                                const GridLimits& limits, double height_tolerance_m = 0.01);

/// Point where the axis with this orientation meets the plane z = plane_z,
/// if it does.
std::optional<Point2> axis_plane_intersection(const Vec3& tx_pos, const Vec3& orientation,
                                              double plane_z);

}  // namespace vlcsteer
