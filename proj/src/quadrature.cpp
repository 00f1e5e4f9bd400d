// quadrature.cpp

#include "fkldg/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace fkldg {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::runtime_error("gauss_legendre: need at least one point");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = std::acos(-1.0);
  // Newton iteration on P_n from the Chebyshev-based initial guess; symmetric
  // pairs are filled together.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

QuadRule segment_rule(const Vec2& a, const Vec2& b, int degree) {
  const int n = degree / 2 + 1;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadRule q;
  const double half_len = 0.5 * (b - a).norm();
  q.points.reserve(n);
  q.weights.reserve(n);
  for (int i = 0; i < n; ++i) {
    q.points.push_back(0.5 * (a + b) + 0.5 * x[i] * (b - a));
    q.weights.push_back(w[i] * half_len);
  }
  return q;
}

QuadRule triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int degree) {
  // The Jacobian factor (1-u) raises the u-direction degree by one, hence the
  // asymmetric point counts: 2*nu-1 >= degree+1 and 2*nv-1 >= degree.
  const int nu = (degree + 3) / 2;
  const int nv = (degree + 2) / 2;
  std::vector<double> xu, wu, xv, wv;
  gauss_legendre(nu, xu, wu);
  gauss_legendre(nv, xv, wv);
  const double jac = cross2(b - a, c - a);  // twice the signed triangle area
  QuadRule q;
  q.points.reserve(nu * nv);
  q.weights.reserve(nu * nv);
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    for (int j = 0; j < nv; ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      const double x = u;
      const double y = v * (1.0 - u);
      q.points.push_back(a + x * (b - a) + y * (c - a));
      q.weights.push_back(0.25 * wu[i] * wv[j] * (1.0 - u) * jac);
    }
  }
  return q;
}

namespace {

void append_triangle(QuadRule& q, const Vec2& a, const Vec2& b, const Vec2& c, int degree) {
  QuadRule t = triangle_rule(a, b, c, degree);
  q.points.insert(q.points.end(), t.points.begin(), t.points.end());
  q.weights.insert(q.weights.end(), t.weights.begin(), t.weights.end());
}

// Ear clipping for simple polygons whose centroid fan degenerates.
std::vector<std::array<int, 3>> ear_clip(const Polygon& poly) {
  const int n = static_cast<int>(poly.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::vector<std::array<int, 3>> tris;
  std::vector<int> cur = idx;
  int guard = 0;
  while (cur.size() > 3) {
    if (++guard > 10 * n) throw std::runtime_error("polygon_rule: ear clipping failed");
    bool clipped = false;
    const int m = static_cast<int>(cur.size());
    for (int i = 0; i < m; ++i) {
      const Vec2& a = poly[cur[(i + m - 1) % m]];
      const Vec2& b = poly[cur[i]];
      const Vec2& c = poly[cur[(i + 1) % m]];
      if (cross2(b - a, c - a) <= 0.0) continue;  // reflex corner
      bool empty = true;
      for (int j = 0; j < m && empty; ++j) {
        if (j == i || j == (i + m - 1) % m || j == (i + 1) % m) continue;
        const Vec2& p = poly[cur[j]];
        const bool inside = cross2(b - a, p - a) >= 0.0 && cross2(c - b, p - b) >= 0.0 &&
                            cross2(a - c, p - c) >= 0.0;
        if (inside) empty = false;
      }
      if (!empty) continue;
      tris.push_back({cur[(i + m - 1) % m], cur[i], cur[(i + 1) % m]});
      cur.erase(cur.begin() + i);
      clipped = true;
      break;
    }
    if (!clipped) throw std::runtime_error("polygon_rule: no ear found, polygon not simple?");
  }
  tris.push_back({cur[0], cur[1], cur[2]});
  return tris;
}

}  // namespace

QuadRule polygon_rule(const Polygon& poly, int degree) {
  if (poly.size() < 3) throw std::runtime_error("polygon_rule: need at least 3 vertices");
  const Vec2 c = polygon_centroid(poly);
  const size_t n = poly.size();
  bool fan_ok = true;
  for (size_t i = 0; i < n && fan_ok; ++i) {
    if (cross2(poly[i] - c, poly[(i + 1) % n] - c) <= 0.0) fan_ok = false;
  }
  QuadRule q;
  if (fan_ok) {
    for (size_t i = 0; i < n; ++i) append_triangle(q, c, poly[i], poly[(i + 1) % n], degree);
  } else {
    for (const auto& t : ear_clip(poly))
      append_triangle(q, poly[t[0]], poly[t[1]], poly[t[2]], degree);
  }
  return q;
}

}  // namespace fkldg
