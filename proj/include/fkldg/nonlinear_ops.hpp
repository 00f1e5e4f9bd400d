// nonlinear_ops.hpp
//
// State-dependent operators of the entropy formulation. With w_h the scalar
// field of coefficients W and sigma_h the vector field of coefficients S:
//   N(W)   block-diagonal weighted vector mass, cell blocks
//            D otimes int s''(u(w_h)) phi phi
//   U(W)   load vector  int u(w_h) psi
//   F(W)   load vector  int alpha u(w_h)(1 - u(w_h)) psi
//   DU, DF their Jacobians (block diagonal, m x m per cell)
//   P(W,S) Jacobian of W -> N(W) S at fixed S: cell blocks 2m x m with
//            P[(p,a),c] = int (d/dw s''(u(w))) phi_c (D sigma_h)_p phi_a.
// Every integral uses the cell quadrature of the space, matching assembly.
#pragma once

#include "fkldg/coeff_field.hpp"
#include "fkldg/dgspace.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace fkldg {

// Factored cell blocks of N(W); solve applies N^-1 blockwise.
struct EntropyMass {
  int m = 0;
  std::vector<Eigen::MatrixXd> blocks;                // 2m x 2m
  std::vector<Eigen::LLT<Eigen::MatrixXd>> factors;

  Eigen::VectorXd apply(const Eigen::VectorXd& R) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& R) const;
};

class NonlinearOps {
 public:
  NonlinearOps(const DgSpace& space, const CoeffField& coeffs);

  const DgSpace& space() const { return *space_; }

  // Fails (std::runtime_error) if any cell block loses positive definiteness,
  // which can only happen through non-finite coefficients.
  EntropyMass assemble_N(const Eigen::VectorXd& W) const;

  Eigen::VectorXd eval_U(const Eigen::VectorXd& W) const;
  Eigen::VectorXd eval_F(const Eigen::VectorXd& W) const;

  // int_Omega u(w_h), always inside (0, |Omega|).
  double mass_of_u(const Eigen::VectorXd& W) const;
  // int_Omega s(u(w_h)), the entropy functional.
  double entropy_of_w(const Eigen::VectorXd& W) const;

  std::vector<Eigen::MatrixXd> jacobian_U(const Eigen::VectorXd& W) const;  // m x m per cell
  std::vector<Eigen::MatrixXd> jacobian_F(const Eigen::VectorXd& W) const;  // m x m per cell
  std::vector<Eigen::MatrixXd> jacobian_N(const Eigen::VectorXd& W,
                                          const Eigen::VectorXd& S) const;  // 2m x m per cell

  // w_h values at the quadrature points of cell k.
  Eigen::VectorXd values_at_quad(const Eigen::VectorXd& W, int k) const;

 private:
  const DgSpace* space_;
  const CoeffField* coeffs_;
};

}  // namespace fkldg
