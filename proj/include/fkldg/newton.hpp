// newton.hpp
//
// Newton solver for one implicit BDF step of the entropy-variable system
//   G1(W, S) = N(W) S + C W                                   = 0
//   G2(W, S) = eps A W + (tau beta)^-1 (U(W) - hist) - C^T S
//              + J W - F(W) - g                               = 0.
// Eliminating the linearized S gives a scalar Schur system whose matrix
//   H = eps A + (tau beta)^-1 DU + J - DF + C^T N^-1 (P + C)
// shares the sparsity pattern of A; the pattern and its scatter maps are
// prepared once and refilled every iteration.
#pragma once

#include "fkldg/ldg_system.hpp"
#include "fkldg/nonlinear_ops.hpp"

#include <Eigen/Sparse>
#include <stdexcept>
#include <string>
#include <vector>

namespace fkldg {

struct NewtonConfig {
  double tol = 1e-10;  // on min(increment L2 norm, reduced residual norm)
  int max_iters = 200;  // crude guesses at large tau can spend many damped iterations first
  bool iterative = false;   // BiCGSTAB with block-Jacobi instead of sparse LU
  double lin_tol = 1e-13;
  int lin_max_iters = 5000;
  // Per-iteration pointwise trust window: neither u nor 1-u may shrink by
  // more than a factor e^trust_w at any quadrature point, so one step cannot
  // jump across the logistic transition onto the far plateau where the
  // residual goes flat and backtracking starves. Off by default: time
  // stepping starts from live warm guesses, and its saturated tails need
  // free slides (capping them trades one overshoot per tail dof for many
  // capped iterations whose accepted steps drift tails into the flat zone).
  // Enable for one-shot solves from badly saturated guesses.
  double trust_w = 0.0;
};

struct NewtonTrace {
  struct Row {
    int iteration;
    double increment;
    double residual;
    double step_scale = 1.0;  // accepted line-search fraction; 0 when no step was taken
  };
  std::vector<Row> rows;
  bool converged = false;
};

class NewtonFailure : public std::runtime_error {
 public:
  NewtonFailure(const std::string& what, NewtonTrace trace)
      : std::runtime_error(what), trace(std::move(trace)) {}
  NewtonTrace trace;
};

// Data of a single implicit step. hist_combo holds sum_j a_j U^(n+1-j);
// g_load may be empty when the scenario has no manufactured source.
struct StepProblem {
  double tau = 0.0;
  double beta = 1.0;
  double eps = 0.0;
  Eigen::VectorXd hist_combo;
  Eigen::VectorXd g_load;
};

class NewtonSolver {
 public:
  NewtonSolver(const LdgSystem& sys, const NonlinearOps& ops, const NewtonConfig& cfg);

  const NewtonConfig& config() const { return cfg_; }

  Eigen::VectorXd residual_G1(const Eigen::VectorXd& W, const Eigen::VectorXd& S) const;
  Eigen::VectorXd residual_G2(const StepProblem& prob, const Eigen::VectorXd& W,
                              const Eigen::VectorXd& S) const;
  // G2 with S synchronized to -N(W)^-1 C W, the stopping-test residual.
  Eigen::VectorXd reduced_residual(const StepProblem& prob, const Eigen::VectorXd& W) const;

  // One linearized update from (W, S).
  void newton_step(const StepProblem& prob, const Eigen::VectorXd& W, const Eigen::VectorXd& S,
                   Eigen::VectorXd& W_out, Eigen::VectorXd& S_out);

  // Full solve from the initial guess in W; on return W and S hold the
  // converged pair (S exactly satisfies G1 = 0). At least one linearized
  // solve is performed. Throws NewtonFailure when max_iters is exhausted.
  NewtonTrace solve_step(const StepProblem& prob, Eigen::VectorXd& W, Eigen::VectorXd& S);

 private:
  // Scatter-maps from per-cell dense contributions into the CSC value array.
  void build_pattern();
  void fill_matrix(const StepProblem& prob, const EntropyMass& N,
                   const std::vector<Eigen::MatrixXd>& P,
                   const std::vector<Eigen::MatrixXd>& DU,
                   const std::vector<Eigen::MatrixXd>& DF);
  Eigen::VectorXd solve_linear(const Eigen::VectorXd& rhs, const Eigen::VectorXd& guess);

  const LdgSystem* sys_;
  const NonlinearOps* ops_;
  NewtonConfig cfg_;

  Eigen::SparseMatrix<double> H_;       // Schur matrix, pattern fixed
  std::vector<std::vector<int>> qslots_;  // per cell: slots of the neighborhood block
  std::vector<int> jslots_;               // per nnz of J: slot in H
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  bool analyzed_ = false;
};

}  // namespace fkldg
