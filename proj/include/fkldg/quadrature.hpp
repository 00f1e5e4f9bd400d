// quadrature.hpp
//
// Gauss-Legendre rules on segments and collapsed tensor rules on triangles,
// composed into per-polygon rules by triangulating from the centroid.
// All weights are strictly positive and all points lie inside the element,
// which the entropy-stability argument relies on.
#pragma once

#include "fkldg/geometry.hpp"

#include <vector>

namespace fkldg {

struct QuadRule {
  std::vector<Vec2> points;
  std::vector<double> weights;  // sum equals the element measure

  int size() const { return static_cast<int>(points.size()); }
};

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
// exact for polynomials of degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Rule on the segment [a, b] exact for 1D polynomials of degree `degree`.
QuadRule segment_rule(const Vec2& a, const Vec2& b, int degree);

// Rule on triangle (a, b, c) exact for bivariate degree `degree`, built by
// collapsing a tensor Gauss rule on the unit square onto the unit triangle
// (x = u, y = v(1-u), Jacobian 1-u) and mapping affinely.
QuadRule triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int degree);

// Rule on a simple polygon: fan triangulation from the centroid when that
// yields positively oriented triangles (always for convex cells), otherwise
// an ear-clipping triangulation.
QuadRule polygon_rule(const Polygon& poly, int degree);

}  // namespace fkldg
