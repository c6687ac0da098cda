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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "frozen_values.hpp"
#include "vlcsteer/geometry.hpp"

namespace vlcsteer {
namespace {

GridLimits limits(double delta = 2.0) {
  GridLimits l;
  l.delta_deg = delta;
  l.gammas = {5.0};
  return l;
}

// O(n h) half-plane test against the counterclockwise hull.
bool inside_hull(const Hull2D& hull, const Point2& p, double tol = 1e-9) {
  const auto& v = hull.vertices;
  if (v.size() < 3) return distance_to_hull(hull, p) <= tol;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross < -tol) return false;
  }
  return true;
}

TEST(Orientation, NadirIsStraightDown) {
  const Vec3 o = orientation_from_angles({270.0, 0.0});
  EXPECT_EQ(o.x, 0.0);
  EXPECT_EQ(o.y, 0.0);
  EXPECT_EQ(o.z, -1.0);
}

TEST(Orientation, NadirIgnoresAzimuth) {
  const Vec3 o = orientation_from_angles({270.0, 123.0});
  EXPECT_NEAR(o.x, 0.0, 1e-15);
  EXPECT_NEAR(o.y, 0.0, 1e-15);
  EXPECT_EQ(o.z, -1.0);
}

TEST(Orientation, TiltedAtEdgeOfRange) {
  const Vec3 o = orientation_from_angles({340.0, 90.0});
  EXPECT_NEAR(o.x, 0.0, 1e-15);
  EXPECT_NEAR(o.y, frozen::kOrientY340, 1e-15);
  EXPECT_NEAR(o.z, frozen::kOrientZ340, 1e-15);
}

TEST(Orientation, UnitNormOnRandomAngles) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> a(0.0, 360.0);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 o = orientation_from_angles({a(rng), a(rng)});
    ASSERT_NEAR(o.norm(), 1.0, 1e-12);
  }
}

TEST(LinkGeometry, CollinearNadir) {
  const LinkGeometry g = link_geometry({0, 0, 4}, {0, 0, -1}, {0, 0, 0.85}, {0, 0, 1});
  EXPECT_DOUBLE_EQ(g.cos_phi, 1.0);
  EXPECT_DOUBLE_EQ(g.cos_theta, 1.0);
  EXPECT_NEAR(g.distance, 3.15, 1e-15);
}

TEST(LinkGeometry, FortyFiveDegrees) {
  const LinkGeometry g = link_geometry({0, 0, 4}, {0, 0, -1}, {3.15, 0, 0.85}, {0, 0, 1});
  EXPECT_NEAR(g.cos_phi, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g.cos_theta, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g.distance, frozen::kOffAxisDistance, 1e-14);
}

TEST(LinkGeometry, BehindTheBeamIsNegative) {
  const LinkGeometry g = link_geometry({0, 0, 4}, {0, 0, 1}, {0, 0, 0.85}, {0, 0, 1});
  EXPECT_LT(g.cos_phi, 0.0);
}

TEST(LinkGeometry, CoincidentPositionsRejected) {
  EXPECT_THROW(link_geometry({1, 1, 1}, {0, 0, -1}, {1, 1, 1}, {0, 0, 1}), std::domain_error);
}

TEST(ConvexHull, DropsInteriorPoint) {
  const std::vector<Point2> pts{{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}};
  const Hull2D h = convex_hull(pts);
  std::vector<Point2> v = h.vertices;
  std::sort(v.begin(), v.end());
  EXPECT_EQ(v, (std::vector<Point2>{{0, 0}, {0, 2}, {2, 0}, {2, 2}}));
}

TEST(ConvexHull, CollinearGivesSegment) {
  const std::vector<Point2> pts{{0, 0}, {1, 1}, {2, 2}};
  const Hull2D h = convex_hull(pts);
  ASSERT_TRUE(h.is_segment());
  std::vector<Point2> v = h.vertices;
  std::sort(v.begin(), v.end());
  EXPECT_EQ(v, (std::vector<Point2>{{0, 0}, {2, 2}}));
}

TEST(ConvexHull, DuplicatesCollapseToPoint) {
  const std::vector<Point2> pts{{3, 4}, {3, 4}, {3, 4}};
  EXPECT_TRUE(convex_hull(pts).is_point());
}

TEST(ConvexHull, EmptyRejected) {
  EXPECT_THROW(convex_hull(std::vector<Point2>{}), std::domain_error);
}

TEST(ConvexHull, CounterclockwiseLeftTurns) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  std::vector<Point2> pts(40);
  for (auto& p : pts) p = {u(rng), u(rng)};
  const auto& v = convex_hull(pts).vertices;
  ASSERT_GE(v.size(), 3u);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    const Point2& c = v[(i + 2) % v.size()];
    EXPECT_GT((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x), 0.0);
  }
}

TEST(ConvexHull, ContainsEveryRandomPoint) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point2> pts(50);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const Hull2D h = convex_hull(pts);
    for (const auto& p : pts) ASSERT_TRUE(inside_hull(h, p));
  }
}

TEST(ConvexHull, PermutationInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  std::vector<Point2> pts(30);
  for (auto& p : pts) p = {u(rng), u(rng)};
  std::vector<Point2> ref = convex_hull(pts).vertices;
  std::sort(ref.begin(), ref.end());
  for (int i = 0; i < 10; ++i) {
    std::shuffle(pts.begin(), pts.end(), rng);
    std::vector<Point2> v = convex_hull(pts).vertices;
    std::sort(v.begin(), v.end());
    EXPECT_EQ(v, ref);
  }
}

TEST(DistanceToHull, ZeroInsidePositiveOutside) {
  const std::vector<Point2> pts{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  const Hull2D h = convex_hull(pts);
  EXPECT_EQ(distance_to_hull(h, {1, 1}), 0.0);
  EXPECT_NEAR(distance_to_hull(h, {3, 1}), 1.0, 1e-12);
}

TEST(FullGrid, SizesAndSpacing) {
  const AngleGrid g = full_grid(limits());
  EXPECT_EQ(g.alphas.size(), 71u);  // 200..340 inclusive
  EXPECT_EQ(g.betas.size(), 180u);  // [0, 360)
  EXPECT_EQ(g.gammas.size(), 1u);
  EXPECT_DOUBLE_EQ(g.alphas[1] - g.alphas[0], 2.0);
  EXPECT_DOUBLE_EQ(g.mask_ratio(), 1.0);
}

TEST(FullGrid, FlatIndexRoundTrip) {
  GridLimits l = limits(10.0);
  l.gammas = {1, 2, 3};
  const AngleGrid g = full_grid(l);
  for (std::size_t f = 0; f < g.cell_count(); ++f) {
    const auto c = g.unflatten(f);
    ASSERT_EQ(g.flat_index(c.alpha_index, c.beta_index, c.gamma_index), f);
  }
}

TEST(FullGrid, BadLimitsRejected) {
  EXPECT_THROW(full_grid(limits(0.0)), std::domain_error);
  GridLimits l = limits();
  l.gammas.clear();
  EXPECT_THROW(full_grid(l), std::domain_error);
}

TEST(ReducedGrid, NadirPointHullStaysWithinOneStep) {
  const Vec3 ap{4, 4, 4};
  const std::vector<Point2> pts{{4, 4}};
  const AngleGrid g = reduced_grid(convex_hull(pts), ap, 0.85, limits());
  bool has_nadir = false;
  for (std::size_t d = 0; d < g.direction_count(); ++d) {
    if (!g.mask[d]) continue;
    const SteeringAngles a = g.angles_at(d);
    EXPECT_LE(std::abs(a.alpha_deg - 270.0), 2.0 + 1e-9);
    has_nadir |= a.alpha_deg == 270.0;
  }
  EXPECT_TRUE(has_nadir);
}

TEST(ReducedGrid, AxisThroughUserIsMasked) {
  const Vec3 ap{4, 4, 4};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.5, 7.5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<Point2> pts{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    const AngleGrid g = reduced_grid(convex_hull(pts), ap, 0.85, limits());
    for (std::size_t d = 0; d < g.direction_count(); ++d) {
      const auto hit = axis_plane_intersection(ap, orientation_from_angles(g.angles_at(d)), 0.85);
      if (hit && inside_hull(convex_hull(pts), *hit)) ASSERT_TRUE(g.mask[d]);
    }
  }
}

TEST(ReducedGrid, MaskGrowsWithUsers) {
  const Vec3 ap{4, 4, 4};
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point2> pts{{u(rng), u(rng)}, {u(rng), u(rng)}};
    double prev = reduced_grid(convex_hull(pts), ap, 0.85, limits()).mask_ratio();
    for (int extra = 0; extra < 4; ++extra) {
      pts.push_back({u(rng), u(rng)});
      const double r = reduced_grid(convex_hull(pts), ap, 0.85, limits()).mask_ratio();
      EXPECT_GE(r, prev);
      EXPECT_GT(r, 0.0);
      EXPECT_LE(r, 1.0);
      prev = r;
    }
  }
}

TEST(ReducedGrid, FewUsersMuchSmallerThanFullGrid) {
  const Vec3 ap{4, 4, 4};
  const std::vector<Point2> two{{2, 2}, {3, 5}};
  EXPECT_LT(reduced_grid(convex_hull(two), ap, 0.85, limits()).mask_ratio(), 0.2);
}

TEST(ReducedGrid, PlaneAboveTransmitterRejected) {
  const std::vector<Point2> pts{{1, 1}};
  EXPECT_THROW(reduced_grid(convex_hull(pts), {4, 4, 4}, 4.5, limits()), std::domain_error);
}

TEST(SearchGrid, MixedHeightsUseFullGrid) {
  const std::vector<Vec3> users{{1, 1, 0.85}, {5, 5, 1.2}};
  EXPECT_DOUBLE_EQ(search_grid_for_users(users, {4, 4, 4}, limits()).mask_ratio(), 1.0);
}

TEST(AxisPlane, SidewaysAxisMisses) {
  EXPECT_FALSE(axis_plane_intersection({4, 4, 4}, {1, 0, 0}, 0.85).has_value());
  const auto hit = axis_plane_intersection({4, 4, 4}, {0, 0, -1}, 0.85);
  ASSERT_TRUE(hit.has_value());
  EXPECT_DOUBLE_EQ(hit->x, 4.0);
}

}  // namespace
}  // namespace vlcsteer
