// geometry.hpp
//
// Small 2D geometric primitives shared by the mesh and assembly layers:
// polygon measures, centroids, convex clipping, point location.
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fkldg {

using Vec2 = Eigen::Vector2d;
using Polygon = std::vector<Vec2>;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Signed area, positive for counter-clockwise loops.
double polygon_signed_area(const Polygon& p);

// Area-weighted centroid (shoelace formula). Requires nonzero area.
Vec2 polygon_centroid(const Polygon& p);

// Max pairwise vertex distance.
double polygon_diameter(const Polygon& p);

// Axis-aligned bounding box as (lo, hi).
std::pair<Vec2, Vec2> polygon_bbox(const Polygon& p);

// True if the closed polyline has no self-intersections (shared endpoints of
// adjacent edges excluded). O(n^2), fine for mesh cells.
bool polygon_is_simple(const Polygon& p);

// True if q lies inside (or on the boundary of) a convex CCW polygon.
bool convex_contains(const Polygon& poly, const Vec2& q, double tol = 0.0);

// Sutherland-Hodgman clip of a convex polygon against the half-plane
//   { x : n . x <= b }.
// Returns the (possibly empty) clipped polygon.
Polygon clip_halfplane(const Polygon& poly, const Vec2& n, double b);

// Second moment of the polygon about the point g: integral of |x - g|^2.
double polygon_second_moment(const Polygon& p, const Vec2& g);

}  // namespace fkldg
