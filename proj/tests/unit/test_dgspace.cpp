// Broken polynomial spaces: dimensions, orthonormality of the cell bases,
// projection properties, and quadrature exactness through the Green oracle.
#include "fkldg/dgspace.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fkldg;
using testing::green_monomial_integral;

namespace {

PolyMesh small_mesh() {
  const Polygon domain = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  return generate_voronoi(domain, 8, 4, 5);
}

}  // namespace

TEST_CASE("dimension bookkeeping") {
  const PolyMesh m = small_mesh();
  for (int l : {1, 2, 3, 4}) {
    const DgSpace space(m, l);
    CHECK(space.dofs_per_cell() == (l + 1) * (l + 2) / 2);
    CHECK(space.n_scalar_dofs() == space.dofs_per_cell() * m.n_cells());
    CHECK(space.n_vector_dofs() == 2 * space.n_scalar_dofs());
  }
  const DgSpace lin(m, 1);
  CHECK(lin.dofs_per_cell() == 3);
  const DgSpace quartic(m, 4);
  CHECK(quartic.dofs_per_cell() == 15);
  CHECK_THROWS(DgSpace(m, 0));
  CHECK_THROWS(DgSpace(m, 9));
}

TEST_CASE("cell bases are orthonormal under the cell quadrature") {
  const PolyMesh m = small_mesh();
  const DgSpace space(m, 3);
  const int mdof = space.dofs_per_cell();
  for (int k = 0; k < m.n_cells(); ++k) {
    const auto& cd = space.cell(k);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(mdof, mdof);
    for (int q = 0; q < cd.quad.size(); ++q)
      gram += cd.quad.weights[q] * cd.phi.row(q).transpose() * cd.phi.row(q);
    CHECK((gram - Eigen::MatrixXd::Identity(mdof, mdof)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("cell quadrature is exact for degree 2l+1 monomials") {
  const PolyMesh m = small_mesh();
  for (int l : {1, 2, 3}) {
    const DgSpace space(m, l);
    for (int k = 0; k < std::min(5, m.n_cells()); ++k) {
      const auto& q = space.cell(k).quad;
      const Polygon poly = m.cell_polygon(k);
      for (int a = 0; a <= 2 * l + 1; ++a)
        for (int b = 0; a + b <= 2 * l + 1; ++b) {
          double s = 0.0;
          for (int i = 0; i < q.size(); ++i)
            s += q.weights[i] * std::pow(q.points[i].x(), a) * std::pow(q.points[i].y(), b);
          CHECK(s == doctest::Approx(green_monomial_integral(poly, a, b))
                         .epsilon(1e-12)
                         .scale(1e-12));
        }
    }
  }
}

TEST_CASE("projection reproduces polynomials of the space degree") {
  const PolyMesh m = small_mesh();
  const DgSpace space(m, 2);
  auto f = [](const Vec2& x) {
    return 1.5 - 0.4 * x.x() + 2.0 * x.y() + 0.7 * x.x() * x.x() - 1.1 * x.x() * x.y() +
           0.3 * x.y() * x.y();
  };
  const Eigen::VectorXd W = space.project_scalar(f);
  for (int k = 0; k < m.n_cells(); ++k) {
    const auto& q = space.cell(k).quad;
    for (int i = 0; i < q.size(); ++i)
      CHECK(space.eval_scalar(W, k, q.points[i]) == doctest::Approx(f(q.points[i])).epsilon(1e-12));
    // Gradient of the projection equals the exact gradient for in-space f.
    const Vec2 g = space.eval_scalar_grad(W, k, m.cell_centroids[k]);
    const Vec2 x = m.cell_centroids[k];
    CHECK(g.x() == doctest::Approx(-0.4 + 1.4 * x.x() - 1.1 * x.y()).epsilon(1e-11));
    CHECK(g.y() == doctest::Approx(2.0 - 1.1 * x.x() + 0.6 * x.y()).epsilon(1e-11));
  }
}

TEST_CASE("projection is idempotent and quadrature-orthogonal") {
  const PolyMesh m = small_mesh();
  const DgSpace space(m, 2);
  auto f = [](const Vec2& x) { return std::sin(3.0 * x.x()) * std::cos(2.0 * x.y()); };
  const Eigen::VectorXd W = space.project_scalar(f);
  // Orthogonality: residual f - Pf is quadrature-orthogonal to the basis.
  for (int k = 0; k < m.n_cells(); ++k) {
    const auto& cd = space.cell(k);
    Eigen::VectorXd moments = Eigen::VectorXd::Zero(space.dofs_per_cell());
    for (int q = 0; q < cd.quad.size(); ++q) {
      const double r = f(cd.quad.points[q]) - space.eval_scalar(W, k, cd.quad.points[q]);
      moments += cd.quad.weights[q] * r * cd.phi.row(q).transpose();
    }
    CHECK(moments.cwiseAbs().maxCoeff() < 1e-13);
  }
  // Idempotence: projecting the projection changes nothing.
  const Eigen::VectorXd W2 =
      space.project_scalar([&](const Vec2& x) { return space.eval_scalar(W, 0, x); });
  // Only valid cellwise; use cell 0 against itself.
  const auto& cd = space.cell(0);
  for (int q = 0; q < cd.quad.size(); ++q)
    CHECK(space.eval_scalar(W2, 0, cd.quad.points[q]) ==
          doctest::Approx(space.eval_scalar(W, 0, cd.quad.points[q])).epsilon(1e-12));
}

TEST_CASE("vector fields evaluate componentwise") {
  const PolyMesh m = small_mesh();
  const DgSpace space(m, 1);
  auto f = [](const Vec2& x) { return Vec2(2.0 * x.x() - x.y(), 0.5 + x.y()); };
  const Eigen::VectorXd R = space.project_vector(f);
  for (int k = 0; k < m.n_cells(); ++k) {
    const Vec2 x = m.cell_centroids[k];
    const Vec2 v = space.eval_vector(R, k, x);
    CHECK(v.x() == doctest::Approx(f(x).x()).epsilon(1e-12));
    CHECK(v.y() == doctest::Approx(f(x).y()).epsilon(1e-12));
  }
}

TEST_CASE("facet traces agree with cell evaluations") {
  const PolyMesh m = small_mesh();
  const DgSpace space(m, 2);
  std::mt19937_64 rng(4);
  const Eigen::VectorXd W = testing::random_vector(space.n_scalar_dofs(), 1.0, rng);
  for (size_t fi = 0; fi < m.facets.size(); ++fi) {
    const Facet& f = m.facets[fi];
    const auto& fd = space.facet(static_cast<int>(fi));
    for (int q = 0; q < fd.quad.size(); ++q) {
      const Vec2 x = fd.quad.points[q];
      const double t1 = fd.phi1.row(q).dot(W.segment(space.scalar_offset(f.k1), space.dofs_per_cell()));
      CHECK(t1 == doctest::Approx(space.eval_scalar(W, f.k1, x)).epsilon(1e-12));
      if (f.interior) {
        const double t2 =
            fd.phi2.row(q).dot(W.segment(space.scalar_offset(f.k2), space.dofs_per_cell()));
        CHECK(t2 == doctest::Approx(space.eval_scalar(W, f.k2, x)).epsilon(1e-12));
      }
    }
  }
}
