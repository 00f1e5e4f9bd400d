// diagnostics.cpp

#include "fkldg/diagnostics.hpp"

#include "fkldg/entropy.hpp"

#include <cmath>

namespace fkldg {

ErrorReport error_norms(const LdgSystem& sys, const Eigen::VectorXd& W,
                        const Eigen::VectorXd& S,
                        const std::function<double(const Vec2&)>& exact_c,
                        const std::function<Vec2(const Vec2&)>& exact_grad_c) {
  const DgSpace& space = sys.space();
  const int m = space.dofs_per_cell();
  ErrorReport rep;
  double ec2 = 0.0, es2 = 0.0;
  rep.min_u = 1.0;
  rep.max_u = 0.0;
  for (int k = 0; k < space.mesh().n_cells(); ++k) {
    const auto& cd = space.cell(k);
    const Eigen::VectorXd wq = cd.phi * W.segment(space.scalar_offset(k), m);
    const int off = space.vector_offset(k);
    const Eigen::VectorXd sx = cd.phi * S.segment(off, m);
    const Eigen::VectorXd sy = cd.phi * S.segment(off + m, m);
    for (int q = 0; q < cd.quad.size(); ++q) {
      const double wgt = cd.quad.weights[q];
      const double uq = entropy::u(wq[q]);
      rep.min_u = std::min(rep.min_u, uq);
      rep.max_u = std::max(rep.max_u, uq);
      rep.mass += wgt * uq;
      rep.entropy += wgt * entropy::s_from_w(wq[q]);
      if (exact_c) {
        const double diff = exact_c(cd.quad.points[q]) - uq;
        ec2 += wgt * diff * diff;
      }
      if (exact_grad_c) {
        const Vec2 diff = exact_grad_c(cd.quad.points[q]) + Vec2(sx[q], sy[q]);
        es2 += wgt * diff.squaredNorm();
      }
    }
  }
  rep.E_c = std::sqrt(ec2);
  rep.E_sigma = std::sqrt(es2);
  rep.dg_norm_w = std::sqrt(W.dot(sys.A() * W));
  return rep;
}

double sigma_norm_sq(const DgSpace& space, const Eigen::VectorXd& S) {
  const int m = space.dofs_per_cell();
  double total = 0.0;
  for (int k = 0; k < space.mesh().n_cells(); ++k) {
    const auto& cd = space.cell(k);
    const int off = space.vector_offset(k);
    const Eigen::VectorXd sx = cd.phi * S.segment(off, m);
    const Eigen::VectorXd sy = cd.phi * S.segment(off + m, m);
    for (int q = 0; q < cd.quad.size(); ++q)
      total += cd.quad.weights[q] * (sx[q] * sx[q] + sy[q] * sy[q]);
  }
  return total;
}

EntropyLedger::EntropyLedger(const LdgSystem& sys, const NonlinearOps& ops, double entropy_c0)
    : sys_(&sys),
      ops_(&ops),
      entropy_c0_(entropy_c0),
      area_(sys.space().mesh().total_area()),
      d0_(sys.coeffs().d0()),
      alpha_max_(sys.coeffs().alpha_max()) {}

const LedgerEntry& EntropyLedger::append(int step, double t, double tau, double eps,
                                         const Eigen::VectorXd& W, const Eigen::VectorXd& S,
                                         const Eigen::VectorXd& g_load) {
  LedgerEntry e;
  e.step = step;
  e.t = t;
  e.eps_term = eps == 0.0 ? 0.0 : eps * tau * W.dot(sys_->A() * W);
  e.entropy = ops_->entropy_of_w(W);
  e.sigma_term = 4.0 * d0_ * tau * sigma_norm_sq(sys_->space(), S);
  e.jump_term = tau * W.dot(sys_->J() * W);
  e.budget = tau * entropy::cf_bound * alpha_max_ * area_;
  e.source_work = g_load.size() > 0 ? tau * g_load.dot(W) : 0.0;
  acc_lhs_terms_ += e.eps_term + e.sigma_term + e.jump_term;
  acc_rhs_terms_ += e.budget + e.source_work;
  e.lhs = acc_lhs_terms_ + e.entropy;
  e.rhs = entropy_c0_ + acc_rhs_terms_;
  e.violated = e.lhs > e.rhs + 1e-10 * std::max(1.0, std::abs(e.rhs));
  entries_.push_back(e);
  return entries_.back();
}

bool EntropyLedger::compliant(double rel_slack) const {
  for (const LedgerEntry& e : entries_)
    if (e.lhs > e.rhs + rel_slack * std::max(1.0, std::abs(e.rhs))) return false;
  return true;
}

PositivityReport positivity_scan(const DgSpace& space, const Eigen::VectorXd& W,
                                 int sample_density) {
  PositivityReport rep;
  const int m = space.dofs_per_cell();
  auto consider = [&](int k, const Vec2& x, double wval) {
    const double uval = entropy::u(wval);
    if (uval < rep.min_u) {
      rep.min_u = uval;
      rep.argmin = x;
      rep.cell_min = k;
    }
    if (uval > rep.max_u) {
      rep.max_u = uval;
      rep.argmax = x;
      rep.cell_max = k;
    }
  };
  Eigen::VectorXd basis(m);
  for (int k = 0; k < space.mesh().n_cells(); ++k) {
    const auto& cd = space.cell(k);
    const auto wk = W.segment(space.scalar_offset(k), m);
    const Eigen::VectorXd wq = cd.phi * wk;
    for (int q = 0; q < cd.quad.size(); ++q) consider(k, cd.quad.points[q], wq[q]);

    const Polygon poly = space.mesh().cell_polygon(k);
    const Vec2 c = space.mesh().cell_centroids[k];
    auto eval_at = [&](const Vec2& x) {
      space.eval_basis(k, x, basis);
      consider(k, x, basis.dot(wk));
    };
    eval_at(c);
    const int d = std::max(1, sample_density);
    for (size_t i = 0; i < poly.size(); ++i) {
      const Vec2& a = poly[i];
      const Vec2& b = poly[(i + 1) % poly.size()];
      for (int s = 0; s <= d; ++s) {
        const Vec2 edge_pt = a + (static_cast<double>(s) / d) * (b - a);
        eval_at(edge_pt);
        // interior fill along the spoke towards the centroid
        for (int r = 1; r < d; ++r)
          eval_at(edge_pt + (static_cast<double>(r) / d) * (c - edge_pt));
      }
    }
  }
  return rep;
}

std::vector<double> activation_time(const DgSpace& space,
                                    const std::function<double(const Vec2&)>& c0,
                                    const std::vector<Eigen::VectorXd>& W_snapshots, double tau,
                                    double c_crit) {
  const PolyMesh& mesh = space.mesh();
  const int nc = mesh.n_cells();
  std::vector<double> that(nc, 0.0);
  const int m = space.dofs_per_cell();
  Eigen::VectorXd basis(m);
  // t_0 from the initial datum.
  for (int k = 0; k < nc; ++k)
    if (c0(mesh.cell_centroids[k]) < c_crit) that[k] += tau;
  // Left-endpoint rule: states at t_1 .. t_{N-1} contribute, t_N does not.
  for (size_t n = 0; n + 1 < W_snapshots.size(); ++n) {
    const Eigen::VectorXd& W = W_snapshots[n];
    for (int k = 0; k < nc; ++k) {
      space.eval_basis(k, mesh.cell_centroids[k], basis);
      const double uval = entropy::u(basis.dot(W.segment(space.scalar_offset(k), m)));
      if (uval < c_crit) that[k] += tau;
    }
  }
  return that;
}

}  // namespace fkldg
