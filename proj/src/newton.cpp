// newton.cpp

#include "fkldg/newton.hpp"

#include "fkldg/block_jacobi.hpp"
#include "fkldg/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/IterativeLinearSolvers>
#include <fmt/format.h>

namespace fkldg {

NewtonSolver::NewtonSolver(const LdgSystem& sys, const NonlinearOps& ops,
                           const NewtonConfig& cfg)
    : sys_(&sys), ops_(&ops), cfg_(cfg) {
  build_pattern();
}

void NewtonSolver::build_pattern() {
  H_ = sys_->A();
  H_.makeCompressed();
  const int* outer = H_.outerIndexPtr();
  const int* inner = H_.innerIndexPtr();
  auto slot = [&](int row, int col) {
    const int* first = inner + outer[col];
    const int* last = inner + outer[col + 1];
    const int* it = std::lower_bound(first, last, row);
    if (it == last || *it != row)
      throw std::runtime_error("NewtonSolver: pattern lookup failed");
    return static_cast<int>(it - inner);
  };

  const int m = sys_->space().dofs_per_cell();
  const auto& cols = sys_->C().cols;
  const int nc = sys_->space().mesh().n_cells();
  qslots_.resize(nc);
  for (int k = 0; k < nc; ++k) {
    const auto& nb = cols[k];
    const int n_loc = m * static_cast<int>(nb.size());
    qslots_[k].resize(static_cast<size_t>(n_loc) * n_loc);
    for (size_t j = 0; j < nb.size(); ++j)
      for (int c = 0; c < m; ++c)
        for (size_t i = 0; i < nb.size(); ++i)
          for (int a = 0; a < m; ++a) {
            const int row_loc = static_cast<int>(i) * m + a;
            const int col_loc = static_cast<int>(j) * m + c;
            qslots_[k][static_cast<size_t>(col_loc) * n_loc + row_loc] =
                slot(nb[i] * m + a, nb[j] * m + c);
          }
  }

  const auto& J = sys_->J();
  jslots_.reserve(J.nonZeros());
  for (Eigen::Index o = 0; o < J.outerSize(); ++o)
    for (Eigen::SparseMatrix<double>::InnerIterator it(J, o); it; ++it)
      jslots_.push_back(slot(static_cast<int>(it.row()), static_cast<int>(it.col())));
}

void NewtonSolver::fill_matrix(const StepProblem& prob,
                               const EntropyMass& N, const std::vector<Eigen::MatrixXd>& P,
                               const std::vector<Eigen::MatrixXd>& DU,
                               const std::vector<Eigen::MatrixXd>& DF) {
  const auto& A = sys_->A();
  double* hv = H_.valuePtr();
  const double* av = A.valuePtr();
  const Eigen::Index nnz = H_.nonZeros();
  for (Eigen::Index i = 0; i < nnz; ++i) hv[i] = prob.eps * av[i];

  const auto& J = sys_->J();
  const double* jv = J.valuePtr();
  for (size_t i = 0; i < jslots_.size(); ++i) hv[jslots_[i]] += jv[i];

  const int m = sys_->space().dofs_per_cell();
  const double invtb = 1.0 / (prob.tau * prob.beta);
  const int nc = sys_->space().mesh().n_cells();
  Eigen::MatrixXd T, Q;
  for (int k = 0; k < nc; ++k) {
    const Eigen::MatrixXd& C_k = sys_->C().blk[k];
    T = C_k;
    T.leftCols(m) += P[k];
    Q.noalias() = C_k.transpose() * N.factors[k].solve(T);
    Q.topLeftCorner(m, m) += invtb * DU[k] - DF[k];
    const int n_loc = static_cast<int>(Q.rows());
    const auto& slots = qslots_[k];
    for (int c = 0; c < n_loc; ++c)
      for (int r = 0; r < n_loc; ++r)
        hv[slots[static_cast<size_t>(c) * n_loc + r]] += Q(r, c);
  }
}

Eigen::VectorXd NewtonSolver::solve_linear(const Eigen::VectorXd& rhs,
                                           const Eigen::VectorXd& guess) {
  if (cfg_.iterative) {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, BlockJacobiPreconditioner> solver;
    solver.preconditioner().setBlockSize(sys_->space().dofs_per_cell());
    solver.setTolerance(cfg_.lin_tol);
    solver.setMaxIterations(cfg_.lin_max_iters);
    solver.compute(H_);
    Eigen::VectorXd x = solver.solveWithGuess(rhs, guess);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error(
          fmt::format("NewtonSolver: BiCGSTAB stalled at residual {}", solver.error()));
    return x;
  }
  if (!analyzed_) {
    lu_.analyzePattern(H_);
    analyzed_ = true;
  }
  lu_.factorize(H_);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error("NewtonSolver: sparse LU factorization failed");
  return lu_.solve(rhs);
}

Eigen::VectorXd NewtonSolver::residual_G1(const Eigen::VectorXd& W,
                                          const Eigen::VectorXd& S) const {
  return ops_->assemble_N(W).apply(S) + sys_->C().apply(W);
}

Eigen::VectorXd NewtonSolver::residual_G2(const StepProblem& prob, const Eigen::VectorXd& W,
                                          const Eigen::VectorXd& S) const {
  const double invtb = 1.0 / (prob.tau * prob.beta);
  Eigen::VectorXd r = invtb * (ops_->eval_U(W) - prob.hist_combo);
  r -= sys_->C().apply_transpose(S);
  r += sys_->J() * W;
  r -= ops_->eval_F(W);
  if (prob.eps != 0.0) r += prob.eps * (sys_->A() * W);
  if (prob.g_load.size() > 0) r -= prob.g_load;
  return r;
}

Eigen::VectorXd NewtonSolver::reduced_residual(const StepProblem& prob,
                                               const Eigen::VectorXd& W) const {
  const EntropyMass N = ops_->assemble_N(W);
  const Eigen::VectorXd S = N.solve(-sys_->C().apply(W));
  return residual_G2(prob, W, S);
}

void NewtonSolver::newton_step(const StepProblem& prob, const Eigen::VectorXd& W,
                               const Eigen::VectorXd& S, Eigen::VectorXd& W_out,
                               Eigen::VectorXd& S_out) {
  const EntropyMass N = ops_->assemble_N(W);
  const Eigen::VectorXd S_sync = N.solve(-sys_->C().apply(W));
  const Eigen::VectorXd res = residual_G2(prob, W, S_sync);
  const auto P = ops_->jacobian_N(W, S);
  fill_matrix(prob, N, P, ops_->jacobian_U(W), ops_->jacobian_F(W));
  W_out = solve_linear(H_ * W - res, W);

  // S update from the linearized first equation; independent of the S the
  // caller supplied except through P.
  const int m = sys_->space().dofs_per_cell();
  Eigen::VectorXd rhs = -sys_->C().apply(W_out);
  for (int k = 0; k < sys_->space().mesh().n_cells(); ++k)
    rhs.segment(2 * m * k, 2 * m) += P[k] * (W - W_out).segment(m * k, m);
  S_out = N.solve(rhs);
}

NewtonTrace NewtonSolver::solve_step(const StepProblem& prob, Eigen::VectorXd& W,
                                     Eigen::VectorXd& S) {
  NewtonTrace trace;
  EntropyMass N = ops_->assemble_N(W);
  S = N.solve(-sys_->C().apply(W));
  Eigen::VectorXd res_vec = residual_G2(prob, W, S);
  double res = res_vec.norm();
  for (int k = 1; k <= cfg_.max_iters; ++k) {
    const auto P = ops_->jacobian_N(W, S);
    fill_matrix(prob, N, P, ops_->jacobian_U(W), ops_->jacobian_F(W));
    const Eigen::VectorXd dW = solve_linear(H_ * W - res_vec, W) - W;
    const double increment = dW.norm();

    // Trust window on the pointwise change of u, then backtracking on the
    // reduced residual norm. A rejected trial may even overflow the entropy
    // mass; that throw counts as "no decrease". The stopping test below uses
    // the undamped increment, so damping cannot masquerade as convergence.
    double lambda0 = 1.0;
    if (cfg_.trust_w > 0.0) {
      const DgSpace& space = sys_->space();
      const int m = space.dofs_per_cell();
      for (int c = 0; c < space.mesh().n_cells(); ++c) {
        const Eigen::VectorXd wq = space.cell(c).phi * W.segment(space.scalar_offset(c), m);
        const Eigen::VectorXd dq = space.cell(c).phi * dW.segment(space.scalar_offset(c), m);
        for (int q = 0; q < wq.size(); ++q) {
          const double w0 = wq[q], d = dq[q];
          if (d == 0.0) continue;
          // Moving up shrinks 1-u, moving down shrinks u. The admissible
          // endpoint in w is the logit of the shrunk value, evaluated through
          // log u(w0) = w0 - softplus(w0) so deep tails never overflow.
          double edge;
          if (d > 0.0) {
            const double l = -w0 - entropy::softplus(-w0) - cfg_.trust_w;
            edge = -(l - std::log1p(-std::exp(l)));
          } else {
            const double l = w0 - entropy::softplus(w0) - cfg_.trust_w;
            edge = l - std::log1p(-std::exp(l));
          }
          const double lam = (edge - w0) / d;
          if (lam < lambda0) lambda0 = std::max(lam, 0x1p-40);
        }
      }
    }
    double lambda = lambda0;
    for (;;) {
      const Eigen::VectorXd W_trial = W + lambda * dW;
      double res_trial = std::numeric_limits<double>::infinity();
      EntropyMass N_trial;
      Eigen::VectorXd S_trial, r_trial;
      try {
        N_trial = ops_->assemble_N(W_trial);
        S_trial = N_trial.solve(-sys_->C().apply(W_trial));
        r_trial = residual_G2(prob, W_trial, S_trial);
        res_trial = r_trial.norm();
      } catch (const std::runtime_error&) {
      }
      if (std::isfinite(res_trial) && res_trial <= (1.0 - 1e-4 * lambda) * res) {
        W = W_trial;
        S = std::move(S_trial);
        N = std::move(N_trial);
        res_vec = std::move(r_trial);
        res = res_trial;
        break;
      }
      lambda *= 0.5;
      if (lambda < 0x1p-30 * lambda0) {
        // Stagnation at the floating-point floor: apply the stopping test to
        // the rejected full step before declaring failure.
        trace.rows.push_back({k, increment, res, 0.0});
        if (std::min(increment, res) <= cfg_.tol) {
          trace.converged = true;
          return trace;
        }
        throw NewtonFailure(
            fmt::format("Newton line search stalled at residual {} (iteration {})", res, k),
            trace);
      }
    }

    trace.rows.push_back({k, increment, res, lambda});
    if (std::min(increment, res) <= cfg_.tol) {
      trace.converged = true;
      return trace;
    }
  }
  throw NewtonFailure(fmt::format("Newton did not reach tol {} in {} iterations (residual {})",
                                  cfg_.tol, cfg_.max_iters, res),
                      trace);
}

}  // namespace fkldg
