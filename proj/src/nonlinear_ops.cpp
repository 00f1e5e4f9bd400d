// nonlinear_ops.cpp

#include "fkldg/nonlinear_ops.hpp"

#include "fkldg/entropy.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace fkldg {

Eigen::VectorXd EntropyMass::apply(const Eigen::VectorXd& R) const {
  Eigen::VectorXd out(R.size());
  const int bs = 2 * m;
  for (size_t k = 0; k < blocks.size(); ++k)
    out.segment(k * bs, bs) = blocks[k] * R.segment(k * bs, bs);
  return out;
}

Eigen::VectorXd EntropyMass::solve(const Eigen::VectorXd& R) const {
  Eigen::VectorXd out(R.size());
  const int bs = 2 * m;
  for (size_t k = 0; k < blocks.size(); ++k)
    out.segment(k * bs, bs) = factors[k].solve(R.segment(k * bs, bs));
  return out;
}

NonlinearOps::NonlinearOps(const DgSpace& space, const CoeffField& coeffs)
    : space_(&space), coeffs_(&coeffs) {}

Eigen::VectorXd NonlinearOps::values_at_quad(const Eigen::VectorXd& W, int k) const {
  const auto& cd = space_->cell(k);
  return cd.phi * W.segment(space_->scalar_offset(k), space_->dofs_per_cell());
}

EntropyMass NonlinearOps::assemble_N(const Eigen::VectorXd& W) const {
  const int nc = space_->mesh().n_cells();
  const int m = space_->dofs_per_cell();
  EntropyMass N;
  N.m = m;
  N.blocks.resize(nc);
  N.factors.resize(nc);
  for (int k = 0; k < nc; ++k) {
    const auto& cd = space_->cell(k);
    const Eigen::VectorXd wq = values_at_quad(W, k);
    Eigen::VectorXd weights(wq.size());
    for (int q = 0; q < wq.size(); ++q)
      weights[q] = cd.quad.weights[q] * entropy::s2(wq[q]);
    const Eigen::MatrixXd S = cd.phi.transpose() * weights.asDiagonal() * cd.phi;
    const Eigen::Matrix2d& D = coeffs_->diffusion(k);
    Eigen::MatrixXd& blk = N.blocks[k];
    blk.resize(2 * m, 2 * m);
    blk.topLeftCorner(m, m) = D(0, 0) * S;
    blk.topRightCorner(m, m) = D(0, 1) * S;
    blk.bottomLeftCorner(m, m) = D(1, 0) * S;
    blk.bottomRightCorner(m, m) = D(1, 1) * S;
    // LLT does not reliably flag NaN inputs, so finiteness is checked first.
    if (!blk.allFinite())
      throw std::runtime_error(
          fmt::format("assemble_N: entropy mass block on cell {} not finite", k));
    N.factors[k].compute(blk);
    if (N.factors[k].info() != Eigen::Success)
      throw std::runtime_error(
          fmt::format("assemble_N: entropy mass block on cell {} not SPD", k));
  }
  return N;
}

Eigen::VectorXd NonlinearOps::eval_U(const Eigen::VectorXd& W) const {
  const int nc = space_->mesh().n_cells();
  const int m = space_->dofs_per_cell();
  Eigen::VectorXd out(space_->n_scalar_dofs());
  for (int k = 0; k < nc; ++k) {
    const auto& cd = space_->cell(k);
    const Eigen::VectorXd wq = values_at_quad(W, k);
    Eigen::VectorXd vals(wq.size());
    for (int q = 0; q < wq.size(); ++q) vals[q] = cd.quad.weights[q] * entropy::u(wq[q]);
    out.segment(space_->scalar_offset(k), m) = cd.phi.transpose() * vals;
  }
  return out;
}

Eigen::VectorXd NonlinearOps::eval_F(const Eigen::VectorXd& W) const {
  const int nc = space_->mesh().n_cells();
  const int m = space_->dofs_per_cell();
  Eigen::VectorXd out(space_->n_scalar_dofs());
  for (int k = 0; k < nc; ++k) {
    const auto& cd = space_->cell(k);
    const double alpha = coeffs_->alpha(k);
    const Eigen::VectorXd wq = values_at_quad(W, k);
    Eigen::VectorXd vals(wq.size());
    // alpha c (1 - c) with c = u(w) equals alpha u'(w).
    for (int q = 0; q < wq.size(); ++q)
      vals[q] = cd.quad.weights[q] * alpha * entropy::u_prime(wq[q]);
    out.segment(space_->scalar_offset(k), m) = cd.phi.transpose() * vals;
  }
  return out;
}

double NonlinearOps::mass_of_u(const Eigen::VectorXd& W) const {
  double total = 0.0;
  for (int k = 0; k < space_->mesh().n_cells(); ++k) {
    const auto& cd = space_->cell(k);
    const Eigen::VectorXd wq = values_at_quad(W, k);
    for (int q = 0; q < wq.size(); ++q) total += cd.quad.weights[q] * entropy::u(wq[q]);
  }
  return total;
}

double NonlinearOps::entropy_of_w(const Eigen::VectorXd& W) const {
  double total = 0.0;
  for (int k = 0; k < space_->mesh().n_cells(); ++k) {
    const auto& cd = space_->cell(k);
    const Eigen::VectorXd wq = values_at_quad(W, k);
    for (int q = 0; q < wq.size(); ++q) total += cd.quad.weights[q] * entropy::s_from_w(wq[q]);
  }
  return total;
}

std::vector<Eigen::MatrixXd> NonlinearOps::jacobian_U(const Eigen::VectorXd& W) const {
  const int nc = space_->mesh().n_cells();
  std::vector<Eigen::MatrixXd> out(nc);
  for (int k = 0; k < nc; ++k) {
    const auto& cd = space_->cell(k);
    const Eigen::VectorXd wq = values_at_quad(W, k);
    Eigen::VectorXd weights(wq.size());
    for (int q = 0; q < wq.size(); ++q)
      weights[q] = cd.quad.weights[q] * entropy::u_prime(wq[q]);
    out[k] = cd.phi.transpose() * weights.asDiagonal() * cd.phi;
  }
  return out;
}

std::vector<Eigen::MatrixXd> NonlinearOps::jacobian_F(const Eigen::VectorXd& W) const {
  const int nc = space_->mesh().n_cells();
  std::vector<Eigen::MatrixXd> out(nc);
  for (int k = 0; k < nc; ++k) {
    const auto& cd = space_->cell(k);
    const double alpha = coeffs_->alpha(k);
    const Eigen::VectorXd wq = values_at_quad(W, k);
    Eigen::VectorXd weights(wq.size());
    // d/dw [alpha u (1-u)] = alpha (1 - 2u) u'.
    for (int q = 0; q < wq.size(); ++q) {
      const double uq = entropy::u(wq[q]);
      weights[q] = cd.quad.weights[q] * alpha * (1.0 - 2.0 * uq) * entropy::u_prime(wq[q]);
    }
    out[k] = cd.phi.transpose() * weights.asDiagonal() * cd.phi;
  }
  return out;
}

std::vector<Eigen::MatrixXd> NonlinearOps::jacobian_N(const Eigen::VectorXd& W,
                                                      const Eigen::VectorXd& S) const {
  const int nc = space_->mesh().n_cells();
  const int m = space_->dofs_per_cell();
  std::vector<Eigen::MatrixXd> out(nc);
  for (int k = 0; k < nc; ++k) {
    const auto& cd = space_->cell(k);
    const int nq = cd.quad.size();
    const Eigen::VectorXd wq = values_at_quad(W, k);
    const int off = space_->vector_offset(k);
    const Eigen::VectorXd sx = cd.phi * S.segment(off, m);
    const Eigen::VectorXd sy = cd.phi * S.segment(off + m, m);
    const Eigen::Matrix2d& D = coeffs_->diffusion(k);
    Eigen::VectorXd tx(nq), ty(nq);
    for (int q = 0; q < nq; ++q) {
      const double t = cd.quad.weights[q] * entropy::s2_prime(wq[q]);
      tx[q] = t * (D(0, 0) * sx[q] + D(0, 1) * sy[q]);
      ty[q] = t * (D(1, 0) * sx[q] + D(1, 1) * sy[q]);
    }
    out[k].resize(2 * m, m);
    out[k].topRows(m) = cd.phi.transpose() * tx.asDiagonal() * cd.phi;
    out[k].bottomRows(m) = cd.phi.transpose() * ty.asDiagonal() * cd.phi;
  }
  return out;
}

}  // namespace fkldg
