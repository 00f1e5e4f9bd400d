// geometry.cpp

#include "fkldg/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fkldg {

double polygon_signed_area(const Polygon& p) {
  double a = 0.0;
  const size_t n = p.size();
  for (size_t i = 0; i < n; ++i) a += cross2(p[i], p[(i + 1) % n]);
  return 0.5 * a;
}

Vec2 polygon_centroid(const Polygon& p) {
  const size_t n = p.size();
  double a = 0.0;
  Vec2 c(0.0, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const Vec2& v0 = p[i];
    const Vec2& v1 = p[(i + 1) % n];
    const double w = cross2(v0, v1);
    a += w;
    c += w * (v0 + v1);
  }
  if (a == 0.0) throw std::runtime_error("polygon_centroid: degenerate polygon");
  return c / (3.0 * a);
}

double polygon_diameter(const Polygon& p) {
  double d2 = 0.0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j) d2 = std::max(d2, (p[i] - p[j]).squaredNorm());
  return std::sqrt(d2);
}

std::pair<Vec2, Vec2> polygon_bbox(const Polygon& p) {
  Vec2 lo(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
  Vec2 hi = -lo;
  for (const Vec2& v : p) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

namespace {

// Proper or improper intersection of closed segments [a,b] and [c,d].
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    const double v = cross2(q - p, r - p);
    const double eps = 1e-14 * std::max({1.0, (q - p).norm() * (r - p).norm()});
    if (v > eps) return 1;
    if (v < -eps) return -1;
    return 0;
  };
  auto on_segment = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return std::min(p.x(), r.x()) <= q.x() && q.x() <= std::max(p.x(), r.x()) &&
           std::min(p.y(), r.y()) <= q.y() && q.y() <= std::max(p.y(), r.y());
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, c, b)) return true;
  if (o2 == 0 && on_segment(a, d, b)) return true;
  if (o3 == 0 && on_segment(c, a, d)) return true;
  if (o4 == 0 && on_segment(c, b, d)) return true;
  return false;
}

}  // namespace

bool polygon_is_simple(const Polygon& p) {
  const size_t n = p.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    const size_t i1 = (i + 1) % n;
    for (size_t j = i + 1; j < n; ++j) {
      const size_t j1 = (j + 1) % n;
      // Skip edges sharing a vertex; adjacency is handled by the loop itself.
      if (i == j || i1 == j || j1 == i) continue;
      if (segments_intersect(p[i], p[i1], p[j], p[j1])) return false;
    }
  }
  return true;
}

bool convex_contains(const Polygon& poly, const Vec2& q, double tol) {
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2 e = poly[(i + 1) % n] - poly[i];
    if (cross2(e, q - poly[i]) < -tol) return false;
  }
  return true;
}

Polygon clip_halfplane(const Polygon& poly, const Vec2& n, double b) {
  Polygon out;
  const size_t m = poly.size();
  if (m == 0) return out;
  out.reserve(m + 1);
  for (size_t i = 0; i < m; ++i) {
    const Vec2& cur = poly[i];
    const Vec2& nxt = poly[(i + 1) % m];
    const double dc = n.dot(cur) - b;
    const double dn = n.dot(nxt) - b;
    if (dc <= 0.0) {
      out.push_back(cur);
      if (dn > 0.0) out.push_back(cur + (dc / (dc - dn)) * (nxt - cur));
    } else if (dn <= 0.0) {
      out.push_back(cur + (dc / (dc - dn)) * (nxt - cur));
    }
  }
  return out;
}

double polygon_second_moment(const Polygon& p, const Vec2& g) {
  // Fan from the centroid; on each triangle integrate |x-g|^2 exactly with the
  // degree-2 midpoint rule (weights 1/3 at edge midpoints).
  const Vec2 c = polygon_centroid(p);
  double total = 0.0;
  const size_t n = p.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % n];
    const double area = 0.5 * cross2(a - c, b - c);
    const Vec2 m0 = 0.5 * (c + a), m1 = 0.5 * (a + b), m2 = 0.5 * (b + c);
    total += area / 3.0 *
             ((m0 - g).squaredNorm() + (m1 - g).squaredNorm() + (m2 - g).squaredNorm());
  }
  return total;
}

}  // namespace fkldg
