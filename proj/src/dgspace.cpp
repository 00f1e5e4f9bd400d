// dgspace.cpp

#include "fkldg/dgspace.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace fkldg {

DgSpace::DgSpace(const PolyMesh& mesh, int degree) : mesh_(&mesh), degree_(degree) {
  if (degree < 1 || degree > 8)
    throw std::runtime_error(fmt::format("DgSpace: degree {} outside [1, 8]", degree));
  m_ = (degree + 1) * (degree + 2) / 2;
  for (int d = 0; d <= degree; ++d)
    for (int i = d; i >= 0; --i) exponents_.emplace_back(i, d - i);

  const int nc = mesh.n_cells();
  cells_.resize(nc);
  for (int k = 0; k < nc; ++k) {
    CellData& cd = cells_[k];
    const Polygon poly = mesh.cell_polygon(k);
    cd.quad = polygon_rule(poly, 2 * degree + 1);
    const auto [lo, hi] = polygon_bbox(poly);
    cd.box_center = 0.5 * (lo + hi);
    cd.box_halfwidth = 0.5 * (hi - lo);
    if (cd.box_halfwidth.minCoeff() <= 0.0)
      throw std::runtime_error(fmt::format("DgSpace: cell {} has a degenerate bounding box", k));

    const int nq = cd.quad.size();
    Eigen::MatrixXd mono(nq, m_);
    Eigen::VectorXd row(m_);
    for (int q = 0; q < nq; ++q) {
      monomials(cd, cd.quad.points[q], row);
      mono.row(q) = row;
    }
    Eigen::Map<const Eigen::VectorXd> w(cd.quad.weights.data(), nq);

    // Conditioning of the raw monomial Gram, kept for diagnostics.
    {
      const Eigen::MatrixXd gram = mono.transpose() * w.asDiagonal() * mono;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
      const double emin = es.eigenvalues().minCoeff();
      if (emin <= 0.0)
        throw std::runtime_error(
            fmt::format("DgSpace: monomial Gram on cell {} is numerically singular", k));
      cd.monomial_cond = es.eigenvalues().maxCoeff() / emin;
    }

    // Modified Gram-Schmidt in the quadrature inner product, applied twice.
    Eigen::MatrixXd v = mono;
    cd.coeff = Eigen::MatrixXd::Identity(m_, m_);
    for (int j = 0; j < m_; ++j) {
      const double norm0 = std::sqrt(v.col(j).dot(w.cwiseProduct(v.col(j))));
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < j; ++i) {
          const double r = v.col(i).dot(w.cwiseProduct(v.col(j)));
          v.col(j) -= r * v.col(i);
          cd.coeff.row(j) -= r * cd.coeff.row(i);
        }
      }
      const double norm = std::sqrt(v.col(j).dot(w.cwiseProduct(v.col(j))));
      if (!(norm > 1e-10 * norm0))
        throw std::runtime_error(
            fmt::format("DgSpace: basis orthonormalization broke down on cell {}", k));
      v.col(j) /= norm;
      cd.coeff.row(j) /= norm;
    }

    cd.phi = v;
    cd.dphix.resize(nq, m_);
    cd.dphiy.resize(nq, m_);
    Eigen::VectorXd gx(m_), gy(m_);
    for (int q = 0; q < nq; ++q) {
      monomial_grads(cd, cd.quad.points[q], gx, gy);
      cd.dphix.row(q) = (cd.coeff * gx).transpose();
      cd.dphiy.row(q) = (cd.coeff * gy).transpose();
    }
    cd.mass = cd.phi.transpose() * w.asDiagonal() * cd.phi;
    cd.mass_llt.compute(cd.mass);
    if (cd.mass_llt.info() != Eigen::Success)
      throw std::runtime_error(fmt::format("DgSpace: mass matrix on cell {} not SPD", k));
  }

  const int nf = static_cast<int>(mesh.facets.size());
  facets_.resize(nf);
  for (int f = 0; f < nf; ++f) {
    const Facet& fc = mesh.facets[f];
    FacetData& fd = facets_[f];
    fd.quad = segment_rule(mesh.vertices[fc.v0], mesh.vertices[fc.v1], 2 * degree + 1);
    const int nq = fd.quad.size();
    fd.phi1.resize(nq, m_);
    Eigen::VectorXd vals(m_);
    for (int q = 0; q < nq; ++q) {
      eval_basis(fc.k1, fd.quad.points[q], vals);
      fd.phi1.row(q) = vals;
    }
    if (fc.interior) {
      fd.phi2.resize(nq, m_);
      for (int q = 0; q < nq; ++q) {
        eval_basis(fc.k2, fd.quad.points[q], vals);
        fd.phi2.row(q) = vals;
      }
    }
  }
}

void DgSpace::monomials(const CellData& cd, const Vec2& x, Eigen::VectorXd& mono) const {
  const double xi = (x.x() - cd.box_center.x()) / cd.box_halfwidth.x();
  const double eta = (x.y() - cd.box_center.y()) / cd.box_halfwidth.y();
  double px[9], py[9];
  px[0] = py[0] = 1.0;
  for (int d = 1; d <= degree_; ++d) {
    px[d] = px[d - 1] * xi;
    py[d] = py[d - 1] * eta;
  }
  for (int j = 0; j < m_; ++j) mono[j] = px[exponents_[j].first] * py[exponents_[j].second];
}

void DgSpace::monomial_grads(const CellData& cd, const Vec2& x, Eigen::VectorXd& gx,
                             Eigen::VectorXd& gy) const {
  const double xi = (x.x() - cd.box_center.x()) / cd.box_halfwidth.x();
  const double eta = (x.y() - cd.box_center.y()) / cd.box_halfwidth.y();
  const double sx = 1.0 / cd.box_halfwidth.x(), sy = 1.0 / cd.box_halfwidth.y();
  double px[9], py[9];
  px[0] = py[0] = 1.0;
  for (int d = 1; d <= degree_; ++d) {
    px[d] = px[d - 1] * xi;
    py[d] = py[d - 1] * eta;
  }
  for (int j = 0; j < m_; ++j) {
    const auto [a, b] = exponents_[j];
    gx[j] = a == 0 ? 0.0 : a * px[a - 1] * py[b] * sx;
    gy[j] = b == 0 ? 0.0 : b * px[a] * py[b - 1] * sy;
  }
}

void DgSpace::eval_basis(int k, const Vec2& x, Eigen::VectorXd& vals) const {
  const CellData& cd = cells_[k];
  Eigen::VectorXd mono(m_);
  monomials(cd, x, mono);
  vals = cd.coeff * mono;
}

void DgSpace::eval_basis_grad(int k, const Vec2& x, Eigen::VectorXd& dx,
                              Eigen::VectorXd& dy) const {
  const CellData& cd = cells_[k];
  Eigen::VectorXd gx(m_), gy(m_);
  monomial_grads(cd, x, gx, gy);
  dx = cd.coeff * gx;
  dy = cd.coeff * gy;
}

double DgSpace::eval_scalar(const Eigen::VectorXd& W, int k, const Vec2& x) const {
  Eigen::VectorXd vals(m_);
  eval_basis(k, x, vals);
  return vals.dot(W.segment(scalar_offset(k), m_));
}

Vec2 DgSpace::eval_scalar_grad(const Eigen::VectorXd& W, int k, const Vec2& x) const {
  Eigen::VectorXd dx(m_), dy(m_);
  eval_basis_grad(k, x, dx, dy);
  const auto wk = W.segment(scalar_offset(k), m_);
  return Vec2(dx.dot(wk), dy.dot(wk));
}

Vec2 DgSpace::eval_vector(const Eigen::VectorXd& R, int k, const Vec2& x) const {
  Eigen::VectorXd vals(m_);
  eval_basis(k, x, vals);
  const int off = vector_offset(k);
  return Vec2(vals.dot(R.segment(off, m_)), vals.dot(R.segment(off + m_, m_)));
}

Eigen::VectorXd DgSpace::project_scalar(const std::function<double(const Vec2&)>& f) const {
  Eigen::VectorXd out(n_scalar_dofs());
  for (int k = 0; k < mesh_->n_cells(); ++k) {
    const CellData& cd = cells_[k];
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int q = 0; q < cd.quad.size(); ++q)
      rhs += cd.quad.weights[q] * f(cd.quad.points[q]) * cd.phi.row(q).transpose();
    out.segment(scalar_offset(k), m_) = cd.mass_llt.solve(rhs);
  }
  return out;
}

Eigen::VectorXd DgSpace::project_vector(const std::function<Vec2(const Vec2&)>& f) const {
  Eigen::VectorXd out(n_vector_dofs());
  for (int k = 0; k < mesh_->n_cells(); ++k) {
    const CellData& cd = cells_[k];
    Eigen::VectorXd rx = Eigen::VectorXd::Zero(m_), ry = Eigen::VectorXd::Zero(m_);
    for (int q = 0; q < cd.quad.size(); ++q) {
      const Vec2 v = f(cd.quad.points[q]);
      rx += cd.quad.weights[q] * v.x() * cd.phi.row(q).transpose();
      ry += cd.quad.weights[q] * v.y() * cd.phi.row(q).transpose();
    }
    const int off = vector_offset(k);
    out.segment(off, m_) = cd.mass_llt.solve(rx);
    out.segment(off + m_, m_) = cd.mass_llt.solve(ry);
  }
  return out;
}

}  // namespace fkldg
