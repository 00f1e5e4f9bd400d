// Mesh connectivity, validity checks, the facet mesh-size function, and the
// Voronoi generator with Lloyd relaxation.
#include "fkldg/polymesh.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace fkldg;

namespace {

PolyMesh unit_square_mesh() {
  PolyMesh m;
  m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  m.cells = {{0, 1, 2, 3}};
  m.finalize();
  return m;
}

// Two unit squares sharing the edge x = 1.
PolyMesh two_square_mesh() {
  PolyMesh m;
  m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {1.0, 1.0}, {0.0, 1.0}};
  m.cells = {{0, 1, 4, 5}, {1, 2, 3, 4}};
  m.finalize();
  return m;
}

Polygon rect(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

}  // namespace

TEST_CASE("single-cell mesh measures") {
  const PolyMesh m = unit_square_mesh();
  CHECK(m.n_cells() == 1);
  CHECK(m.n_interior_facets() == 0);
  CHECK(m.facets.size() == 4);
  CHECK(m.total_area() == doctest::Approx(1.0));
  CHECK(m.cell_areas[0] == doctest::Approx(1.0));
  CHECK(m.cell_centroids[0].x() == doctest::Approx(0.5));
  CHECK(m.cell_centroids[0].y() == doctest::Approx(0.5));
  CHECK(m.cell_diameters[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(m.mesh_size() == doctest::Approx(std::sqrt(2.0)));
  CHECK(m.cell_edge_count(0) == 4);
  // Boundary normals point outward: each should equal the offset from the
  // cell centroid to the facet midpoint, normalized along an axis.
  for (const Facet& f : m.facets) {
    CHECK_FALSE(f.interior);
    CHECK(f.k2 == -1);
    const Vec2 mid = 0.5 * (m.vertices[f.v0] + m.vertices[f.v1]);
    CHECK(f.normal.dot(mid - m.cell_centroids[0]) > 0.0);
    CHECK(f.length == doctest::Approx(1.0));
  }
}

TEST_CASE("two-cell mesh connectivity") {
  const PolyMesh m = two_square_mesh();
  CHECK(m.n_cells() == 2);
  CHECK(m.facets.size() == 7);
  CHECK(m.n_interior_facets() == 1);
  int interior = -1;
  for (size_t f = 0; f < m.facets.size(); ++f)
    if (m.facets[f].interior) interior = static_cast<int>(f);
  REQUIRE(interior >= 0);
  const Facet& f = m.facets[interior];
  CHECK(f.k1 == 0);
  CHECK(f.k2 == 1);
  // Normal points from k1 into k2.
  CHECK(f.normal.x() == doctest::Approx(1.0));
  CHECK(f.normal.y() == doctest::Approx(0.0).scale(1.0));
  const std::set<double> xs = {m.vertices[f.v0].x(), m.vertices[f.v1].x()};
  CHECK(*xs.begin() == doctest::Approx(1.0));
  // Both cells list the shared facet.
  CHECK(std::count(m.cell_facets[0].begin(), m.cell_facets[0].end(), interior) == 1);
  CHECK(std::count(m.cell_facets[1].begin(), m.cell_facets[1].end(), interior) == 1);
  CHECK(m.total_area() == doctest::Approx(2.0));
}

TEST_CASE("finalize rejects invalid cells") {
  PolyMesh cw;
  cw.vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  cw.cells = {{3, 2, 1, 0}};  // clockwise
  CHECK_THROWS(cw.finalize());

  PolyMesh bowtie;
  bowtie.vertices = {{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}};
  bowtie.cells = {{0, 1, 2, 3}};
  CHECK_THROWS(bowtie.finalize());

  PolyMesh oob;
  oob.vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}};
  oob.cells = {{0, 1, 7}};
  CHECK_THROWS(oob.finalize());
}

TEST_CASE("facet mesh size against hand values") {
  // Rectangles [0,4]x[0,1] and [4,20]x[0,1] share a unit facet at x = 4:
  // a1 = 4, a2 = 16 without edge-count weighting, 1 and 4 with it (m = 4).
  PolyMesh m;
  m.vertices = {{0.0, 0.0}, {4.0, 0.0}, {20.0, 0.0}, {20.0, 1.0}, {4.0, 1.0}, {0.0, 1.0}};
  m.cells = {{0, 1, 4, 5}, {1, 2, 3, 4}};
  m.finalize();
  int interior = -1;
  for (size_t f = 0; f < m.facets.size(); ++f)
    if (m.facets[f].interior) interior = static_cast<int>(f);
  REQUIRE(interior >= 0);

  CHECK(m.mesh_size_on_facet(interior, -1.0, 1.0, false) == doctest::Approx(6.4));       // harmonic
  CHECK(m.mesh_size_on_facet(interior, 1.0, 1.0, false) == doctest::Approx(10.0));       // arithmetic
  CHECK(m.mesh_size_on_facet(interior, 0.5, 1.0, false) == doctest::Approx(9.0));        // [(2+4)/2]^2
  CHECK(m.mesh_size_on_facet(interior, 0.5, 1.0, true) == doctest::Approx(2.25));        // [(1+2)/2]^2
  CHECK(m.mesh_size_on_facet(interior, -1.0, 1.0, true) == doctest::Approx(1.6));
  // eta divides the average.
  CHECK(m.mesh_size_on_facet(interior, 1.0, 4.0, false) == doctest::Approx(2.5));
}

TEST_CASE("voronoi generation invariants") {
  const Polygon domain = rect(0.0, 0.0, 2.0, 1.0);
  const PolyMesh m = generate_voronoi(domain, 24, 5, 42);
  CHECK(m.n_cells() == 24);
  CHECK(m.total_area() == doctest::Approx(2.0).epsilon(1e-10));
  for (int k = 0; k < m.n_cells(); ++k) {
    const Polygon p = m.cell_polygon(k);
    CHECK(polygon_is_simple(p));
    CHECK(polygon_signed_area(p) > 0.0);
  }
  // Every facet is either interior with two owners or boundary with one.
  for (const Facet& f : m.facets) {
    if (f.interior) {
      CHECK(f.k1 >= 0);
      CHECK(f.k2 > f.k1);
    } else {
      CHECK(f.k2 == -1);
    }
  }
}

TEST_CASE("voronoi generation is deterministic in the seed") {
  const Polygon domain = rect(0.0, 0.0, 1.0, 1.0);
  const PolyMesh a = generate_voronoi(domain, 15, 3, 7);
  const PolyMesh b = generate_voronoi(domain, 15, 3, 7);
  REQUIRE(a.vertices.size() == b.vertices.size());
  for (size_t i = 0; i < a.vertices.size(); ++i)
    CHECK((a.vertices[i] - b.vertices[i]).norm() == 0.0);
  const PolyMesh c = generate_voronoi(domain, 15, 3, 8);
  bool differs = c.vertices.size() != a.vertices.size();
  for (size_t i = 0; !differs && i < a.vertices.size(); ++i)
    differs = (a.vertices[i] - c.vertices[i]).norm() > 0.0;
  CHECK(differs);
}

TEST_CASE("Lloyd sweeps never increase the centroidal energy") {
  const Polygon domain = rect(0.0, 0.0, 3.0, 1.0);
  std::vector<Vec2> gen;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.0, 3.0), uy(0.0, 1.0);
  for (int i = 0; i < 20; ++i) gen.push_back({ux(rng), uy(rng)});
  double prev = voronoi_energy(domain, gen);
  for (int it = 0; it < 8; ++it) {
    gen = lloyd_sweep(domain, gen);
    const double e = voronoi_energy(domain, gen);
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
}
