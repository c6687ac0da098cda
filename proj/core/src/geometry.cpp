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

#include "vlcsteer/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace vlcsteer {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Signed area of the triangle (o, a, b), doubled. Positive for a left turn.
double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double dist2(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance_to_segment(const Point2& a, const Point2& b, const Point2& p) {
  const double len2 = dist2(a, b);
  if (len2 == 0.0) return std::sqrt(dist2(a, p));
  double t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len2;
  t = std::clamp(t, 0.0, 1.0);
  const Point2 q{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
  return std::sqrt(dist2(q, p));
}

// Exact quadrant values, otherwise the library functions.
bool quadrant(double deg, int& q) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (std::fmod(r, 90.0) != 0.0) return false;
  q = static_cast<int>(r / 90.0) % 4;
  return true;
}

std::vector<double> arange(double lo, double hi, double step, bool inclusive) {
  std::vector<double> out;
  // Values are generated as lo + i * step to keep grids nested under halving.
  for (std::size_t i = 0;; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    if (inclusive ? v > hi + 1e-9 : v >= hi - 1e-9) break;
    out.push_back(v);
  }
  return out;
}

void validate(const GridLimits& limits) {
  if (!(limits.delta_deg > 0.0)) throw std::domain_error("grid step must be positive");
  if (!(limits.alpha_max_deg >= limits.alpha_min_deg))
    throw std::domain_error("alpha range is empty");
  if (limits.gammas.empty()) throw std::domain_error("gamma list is empty");
}

}  // namespace

double cos_deg(double deg) {
  int q = 0;
  if (quadrant(deg, q)) {
    constexpr double kCos[4] = {1.0, 0.0, -1.0, 0.0};
    return kCos[q];
  }
  return std::cos(deg * kDegToRad);
}

double sin_deg(double deg) {
  int q = 0;
  if (quadrant(deg, q)) {
    constexpr double kSin[4] = {0.0, 1.0, 0.0, -1.0};
    return kSin[q];
  }
  return std::sin(deg * kDegToRad);
}

Vec3 orientation_from_angles(const SteeringAngles& angles) {
  const double ca = cos_deg(angles.alpha_deg);
  return {cos_deg(angles.beta_deg) * ca, sin_deg(angles.beta_deg) * ca, sin_deg(angles.alpha_deg)};
}

LinkGeometry link_geometry(const Vec3& tx_pos, const Vec3& tx_orient, const Vec3& rx_pos,
                           const Vec3& rx_orient) {
  const Vec3 v = rx_pos - tx_pos;
  const double d = v.norm();
  if (!(d > 0.0)) throw std::domain_error("transmitter and receiver positions coincide");
  LinkGeometry g;
  g.distance = d;
  g.cos_phi = std::clamp(v.dot(tx_orient) / d, -1.0, 1.0);
  g.cos_theta = std::clamp(-v.dot(rx_orient) / d, -1.0, 1.0);
  return g;
}

Hull2D convex_hull(std::span<const Point2> points) {
  if (points.empty()) throw std::domain_error("convex hull of an empty point set");

  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() == 1) return {pts};

  // Pivot: lowest y, then lowest x.
  auto pivot_it = std::min_element(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.y < b.y || (a.y == b.y && a.x < b.x);
  });
  std::iter_swap(pts.begin(), pivot_it);
  const Point2 p0 = pts.front();

  // Counterclockwise polar order around the pivot; equal angles nearest first.
  std::sort(pts.begin() + 1, pts.end(), [&p0](const Point2& a, const Point2& b) {
    const double c = cross(p0, a, b);
    if (c != 0.0) return c > 0.0;
    return dist2(p0, a) < dist2(p0, b);
  });

  // Of several points at the same polar angle only the farthest survives.
  std::vector<Point2> ordered{p0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (i + 1 < pts.size() && cross(p0, pts[i], pts[i + 1]) == 0.0) continue;
    ordered.push_back(pts[i]);
  }

  std::vector<Point2> stack;
  for (const Point2& p : ordered) {
    while (stack.size() >= 2 && cross(stack[stack.size() - 2], stack.back(), p) <= 0.0)
      stack.pop_back();
    stack.push_back(p);
  }
  return {stack};
}

double distance_to_hull(const Hull2D& hull, const Point2& p) {
  const auto& v = hull.vertices;
  if (v.empty()) return std::numeric_limits<double>::infinity();
  if (v.size() == 1) return std::sqrt(dist2(v[0], p));
  if (v.size() == 2) return distance_to_segment(v[0], v[1], p);

  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    if (cross(a, b, p) < 0.0) inside = false;
    best = std::min(best, distance_to_segment(a, b, p));
  }
  return inside ? 0.0 : best;
}

std::size_t AngleGrid::masked_direction_count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

double AngleGrid::mask_ratio() const {
  if (mask.empty()) return 0.0;
  return static_cast<double>(masked_direction_count()) / static_cast<double>(mask.size());
}

AngleGrid::Cell AngleGrid::unflatten(std::size_t flat) const {
  const std::size_t sg = gammas.size();
  const std::size_t direction = flat / sg;
  return {direction / betas.size(), direction % betas.size(), flat % sg};
}

AngleGrid full_grid(const GridLimits& limits) {
  validate(limits);
  AngleGrid grid;
  grid.delta_deg = limits.delta_deg;
  grid.alphas = arange(limits.alpha_min_deg, limits.alpha_max_deg, limits.delta_deg, true);
  grid.betas = arange(0.0, 360.0, limits.delta_deg, false);
  grid.gammas = limits.gammas;
  grid.mask.assign(grid.direction_count(), true);
  return grid;
}

std::optional<Point2> axis_plane_intersection(const Vec3& tx_pos, const Vec3& orientation,
                                              double plane_z) {
  const double dz = plane_z - tx_pos.z;
  if (orientation.z == 0.0) return std::nullopt;
  const double t = dz / orientation.z;
  if (!(t > 0.0)) return std::nullopt;
  return Point2{tx_pos.x + t * orientation.x, tx_pos.y + t * orientation.y};
}

AngleGrid reduced_grid(const Hull2D& hull, const Vec3& tx_pos, double user_plane_z,
                       const GridLimits& limits) {
  if (!(user_plane_z < tx_pos.z))
    throw std::domain_error("user plane must lie below the transmitter");
  if (hull.vertices.empty()) throw std::domain_error("empty hull");

  AngleGrid grid = full_grid(limits);
  const double height = tx_pos.z - user_plane_z;
  const double step_rad = limits.delta_deg * kDegToRad;
  const std::size_t sa = grid.alphas.size();
  const std::size_t sb = grid.betas.size();

  std::vector<double> cb(sb), sbv(sb);
  for (std::size_t ib = 0; ib < sb; ++ib) {
    cb[ib] = cos_deg(grid.betas[ib]);
    sbv[ib] = sin_deg(grid.betas[ib]);
  }

  double nearest = std::numeric_limits<double>::infinity();
  std::size_t nearest_ia = 0, nearest_ib = 0;

  for (std::size_t ia = 0; ia < sa; ++ia) {
    const double ca = cos_deg(grid.alphas[ia]);
    const double sa_ = sin_deg(grid.alphas[ia]);
    for (std::size_t ib = 0; ib < sb; ++ib) {
      const Vec3 u{cb[ib] * ca, sbv[ib] * ca, sa_};
      const auto hit = axis_plane_intersection(tx_pos, u, user_plane_z);
      const std::size_t dir = grid.direction_index(ia, ib);
      if (!hit) {
        grid.mask[dir] = false;
        continue;
      }
      const double rho2 = (hit->x - tx_pos.x) * (hit->x - tx_pos.x) +
                          (hit->y - tx_pos.y) * (hit->y - tx_pos.y);
      // Distance on the plane swept by one angular grid step at this point.
      const double footprint = step_rad * (height * height + rho2) / height;
      const double dist = distance_to_hull(hull, *hit);
      grid.mask[dir] = dist <= footprint;
      if (hull.is_point() && dist < nearest) {
        nearest = dist;
        nearest_ia = ia;
        nearest_ib = ib;
      }
    }
  }

  if (hull.is_point()) {
    for (int da = -1; da <= 1; ++da) {
      const auto ia = static_cast<std::ptrdiff_t>(nearest_ia) + da;
      if (ia < 0 || ia >= static_cast<std::ptrdiff_t>(sa)) continue;
      for (int db = -1; db <= 1; ++db) {
        const auto ib = (static_cast<std::ptrdiff_t>(nearest_ib) + db + static_cast<std::ptrdiff_t>(sb)) %
                        static_cast<std::ptrdiff_t>(sb);
        grid.mask[grid.direction_index(static_cast<std::size_t>(ia), static_cast<std::size_t>(ib))] = true;
      }
    }
  }
  return grid;
}

AngleGrid search_grid_for_users(std::span<const Vec3> user_positions, const Vec3& tx_pos,
                                const GridLimits& limits, double height_tolerance_m) {
  if (user_positions.empty()) throw std::domain_error("no users");
  double zmin = user_positions.front().z;
  double zmax = zmin;
  std::vector<Point2> planar;
  planar.reserve(user_positions.size());
  for (const Vec3& u : user_positions) {
    zmin = std::min(zmin, u.z);
    zmax = std::max(zmax, u.z);
    planar.push_back({u.x, u.y});
  }
  if (zmax - zmin > height_tolerance_m || !(zmax < tx_pos.z)) return full_grid(limits);
  const double plane_z = 0.5 * (zmin + zmax);
  return reduced_grid(convex_hull(planar), tx_pos, plane_z, limits);
}

}  // namespace vlcsteer
