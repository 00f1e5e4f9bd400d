// LDG operator assembly: facet weights, the gradient form against a direct
// quadrature evaluation, jump penalization, and the stiffness identity.
#include "fkldg/ldg_system.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fkldg;

namespace {

struct Setup {
  PolyMesh mesh;
  DgSpace space;
  CoeffField coeffs;
  LdgSystem sys;

  Setup(int n_cells, int degree, const Eigen::Matrix2d& D, double alpha,
        const AssemblyOptions& opts = {})
      : mesh(generate_voronoi({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}, n_cells, 4, 9)),
        space(mesh, degree),
        coeffs(CoeffField::constant(mesh, alpha, D)),
        sys(space, coeffs, opts) {}
};

Eigen::Matrix2d aniso() {
  Eigen::Matrix2d D;
  D << 2.0, 0.5, 0.5, 1.0;
  return D;
}

// (r_h, G w_h) evaluated from the form definition by element and facet
// quadrature, independent of the assembled blocks.
double gradient_form_direct(const LdgSystem& sys, const Eigen::VectorXd& W,
                            const Eigen::VectorXd& R) {
  const DgSpace& space = sys.space();
  const PolyMesh& mesh = space.mesh();
  double total = 0.0;
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const auto& q = space.cell(k).quad;
    for (int i = 0; i < q.size(); ++i)
      total += q.weights[i] *
               space.eval_scalar_grad(W, k, q.points[i]).dot(space.eval_vector(R, k, q.points[i]));
  }
  for (size_t fi = 0; fi < mesh.facets.size(); ++fi) {
    const Facet& f = mesh.facets[fi];
    if (!f.interior) continue;
    const double gamma = sys.facet_w()[fi].gamma;
    const QuadRule q =
        segment_rule(mesh.vertices[f.v0], mesh.vertices[f.v1], 2 * space.degree() + 1);
    for (int i = 0; i < q.size(); ++i) {
      const Vec2 x = q.points[i];
      // jump (w1 - w2) n against the weighted average gamma r1 + (1-gamma) r2.
      const double jump = space.eval_scalar(W, f.k1, x) - space.eval_scalar(W, f.k2, x);
      const Vec2 avg =
          gamma * space.eval_vector(R, f.k1, x) + (1.0 - gamma) * space.eval_vector(R, f.k2, x);
      total -= q.weights[i] * jump * f.normal.dot(avg);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("facet weights from the diffusion contrast") {
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  const Vec2 n(1.0, 0.0);

  const FacetWeights even = facet_weights(I, I, n, 1.0, 1);
  CHECK(even.gamma == doctest::Approx(0.5));
  CHECK(even.eta == doctest::Approx(1.0));  // 2 * 1 * 1 / 2

  // delta = (1, 3): gamma = 1/4, harmonic-mean penalty 2*3/4 = 1.5, eta0 l^2 = 4.
  const FacetWeights skew = facet_weights(I, 3.0 * I, n, 1.0, 2);
  CHECK(skew.gamma == doctest::Approx(0.25));
  CHECK(skew.eta == doctest::Approx(6.0));

  // Anisotropy enters only through n^T D n.
  Eigen::Matrix2d D2;
  D2 << 3.0, 0.0, 0.0, 1.0;
  CHECK(facet_weights(I, D2, n, 1.0, 1).gamma == doctest::Approx(0.25));
  CHECK(facet_weights(I, D2, Vec2(0.0, 1.0), 1.0, 1).gamma == doctest::Approx(0.5));
}

TEST_CASE("constants are invisible to B, J and the DG part of A") {
  Setup s(12, 2, aniso(), 0.7);
  const Eigen::VectorXd Wc = s.space.project_scalar([](const Vec2&) { return 3.2; });
  CHECK(s.sys.B().apply(Wc).norm() < 1e-11 * Wc.norm());
  CHECK((s.sys.J() * Wc).norm() < 1e-10 * Wc.norm());
  // A collapses to the reaction mass on constants.
  Eigen::VectorXd AW = s.sys.A() * Wc;
  for (int k = 0; k < s.mesh.n_cells(); ++k) {
    const int m = s.space.dofs_per_cell();
    AW.segment(m * k, m) -= s.sys.reaction_mass()[k] * Wc.segment(m * k, m);
  }
  CHECK(AW.norm() < 1e-10 * Wc.norm());
}

TEST_CASE("discrete gradient is exact on globally linear fields") {
  Setup s(10, 1, aniso(), 1.0);
  const Vec2 slope(1.7, -0.6);
  const Eigen::VectorXd W =
      s.space.project_scalar([&](const Vec2& x) { return slope.dot(x) + 0.4; });
  const Eigen::VectorXd GW = s.sys.apply_ldg_gradient(W);
  for (int k = 0; k < s.mesh.n_cells(); ++k) {
    const Vec2 g = s.space.eval_vector(GW, k, s.mesh.cell_centroids[k]);
    CHECK(g.x() == doctest::Approx(slope.x()).epsilon(1e-11));
    CHECK(g.y() == doctest::Approx(slope.y()).epsilon(1e-11));
  }
}

TEST_CASE("lifting of a unit step matches the distributional gradient") {
  // Two unit squares; w jumps 0 -> 1 across x = 1, r = (1, 0):
  // (r, G w) = (w2 - w1) int_F n . r = 1.
  PolyMesh m;
  m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {1.0, 1.0}, {0.0, 1.0}};
  m.cells = {{0, 1, 4, 5}, {1, 2, 3, 4}};
  m.finalize();
  const DgSpace space(m, 1);
  const CoeffField cf = CoeffField::constant(m, 1.0, Eigen::Matrix2d::Identity());
  const LdgSystem sys(space, cf, {});

  Eigen::VectorXd W = Eigen::VectorXd::Zero(space.n_scalar_dofs());
  const int md = space.dofs_per_cell();
  // Cell-local representation of the constant 1 on cell 1.
  const auto& cd = space.cell(1);
  Eigen::VectorXd moments = Eigen::VectorXd::Zero(md);
  for (int q = 0; q < cd.quad.size(); ++q) moments += cd.quad.weights[q] * cd.phi.row(q).transpose();
  W.segment(md, md) = cd.mass_llt.solve(moments);

  const Eigen::VectorXd R = space.project_vector([](const Vec2&) { return Vec2(1.0, 0.0); });
  CHECK(R.dot(sys.B().apply(W)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gradient form agrees with direct quadrature") {
  for (int degree : {1, 2}) {
    Setup s(9, degree, aniso(), 0.5);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 4; ++trial) {
      const Eigen::VectorXd W = testing::random_vector(s.space.n_scalar_dofs(), 1.0, rng);
      const Eigen::VectorXd R = testing::random_vector(s.space.n_vector_dofs(), 1.0, rng);
      const double direct = gradient_form_direct(s.sys, W, R);
      CHECK(R.dot(s.sys.B().apply(W)) == doctest::Approx(direct).epsilon(1e-11).scale(1e-10));
    }
  }
}

TEST_CASE("jump form matches facet quadrature and scales with 1/h") {
  Setup s(10, 2, aniso(), 0.5);
  std::mt19937_64 rng(23);
  const Eigen::VectorXd W = testing::random_vector(s.space.n_scalar_dofs(), 1.0, rng);
  double direct = 0.0;
  for (size_t fi = 0; fi < s.mesh.facets.size(); ++fi) {
    const Facet& f = s.mesh.facets[fi];
    if (!f.interior) continue;
    const double h = s.sys.facet_h()[fi];
    const QuadRule q = segment_rule(s.mesh.vertices[f.v0], s.mesh.vertices[f.v1],
                                    2 * s.space.degree() + 1);
    for (int i = 0; i < q.size(); ++i) {
      const double jump =
          s.space.eval_scalar(W, f.k1, q.points[i]) - s.space.eval_scalar(W, f.k2, q.points[i]);
      direct += q.weights[i] * jump * jump / h;
    }
  }
  CHECK(W.dot(s.sys.J() * W) == doctest::Approx(direct).epsilon(1e-11));
  CHECK(W.dot(s.sys.J() * W) >= 0.0);
}

TEST_CASE("facet_h matches the mesh-size function under the options") {
  const AssemblyOptions opts{0.5, 2.0, true};
  Setup s(10, 2, aniso(), 0.5, opts);
  for (size_t fi = 0; fi < s.mesh.facets.size(); ++fi) {
    if (!s.mesh.facets[fi].interior) continue;
    const double eta = s.sys.facet_w()[fi].eta;
    CHECK(s.sys.facet_h()[fi] ==
          doctest::Approx(s.mesh.mesh_size_on_facet(static_cast<int>(fi), opts.theta, eta,
                                                    opts.use_facet_count))
              .epsilon(1e-13));
  }
}

TEST_CASE("stiffness identity, symmetry and positivity") {
  Setup s(11, 2, aniso(), 0.7);
  const auto& A = s.sys.A();
  // Symmetry of the assembled matrix.
  const Eigen::SparseMatrix<double> At = A.transpose();
  double asym = 0.0, scale = 0.0;
  for (Eigen::Index o = 0; o < A.outerSize(); ++o)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, o); it; ++it) {
      asym = std::max(asym, std::abs(it.value() - At.coeff(it.row(), it.col())));
      scale = std::max(scale, std::abs(it.value()));
    }
  CHECK(asym < 1e-12 * scale);

  // A v = Ma v + B^T MI^-1 MD MI^-1 B v + J v on random vectors.
  std::mt19937_64 rng(31);
  const int md = s.space.dofs_per_cell();
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd v = testing::random_vector(s.space.n_scalar_dofs(), 1.0, rng);
    const Eigen::VectorXd Bv = s.sys.B().apply(v);
    Eigen::VectorXd composed =
        s.sys.B().apply_transpose(s.sys.apply_MI_inverse(s.sys.apply_MD(s.sys.apply_MI_inverse(Bv))));
    composed += s.sys.J() * v;
    for (int k = 0; k < s.mesh.n_cells(); ++k)
      composed.segment(md * k, md) += s.sys.reaction_mass()[k] * v.segment(md * k, md);
    const Eigen::VectorXd Av = A * v;
    CHECK((Av - composed).norm() < 1e-10 * std::max(1.0, Av.norm()));
    CHECK(v.dot(Av) > 0.0);  // alpha > 0 makes A positive definite
  }

  // Adjointness of the block transpose against the sparse copy.
  const Eigen::SparseMatrix<double> Bs = s.sys.B().to_sparse();
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd w = testing::random_vector(s.space.n_scalar_dofs(), 1.0, rng);
    const Eigen::VectorXd r = testing::random_vector(s.space.n_vector_dofs(), 1.0, rng);
    CHECK(r.dot(s.sys.B().apply(w)) ==
          doctest::Approx(w.dot(s.sys.B().apply_transpose(r))).epsilon(1e-12));
    CHECK((s.sys.B().apply(w) - Bs * w).norm() < 1e-12 * std::max(1.0, w.norm()));
  }
}
