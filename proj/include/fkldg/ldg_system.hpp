// ldg_system.hpp
//
// Assembly of the linear LDG operators. With W the scalar coefficients and
// R vector coefficients:
//   M_I  vector mass, block diagonal per cell
//   M_D  diffusion-weighted vector mass (D otimes scalar mass)
//   M_a  reaction-weighted scalar mass
//   B    gradient form  (R, B W) = (grad_h w, r)_Omega - sum_F (jump(w), avg(r))_F
//   J    jump penalization  (W, J V) = sum_F (h_F^-1 jump(w), jump(v))_F
//   A    = M_a + B^T M_I^-1 M_D M_I^-1 B + J, the stiffness behind the
//          epsilon-penalty and the DG norm
//   G    = M_I^-1 B   (discrete gradient in coefficient form)
//   C    = M_D G      (diffusion-scaled discrete gradient)
// B, G, C are kept as dense per-cell row blocks over the cell's neighborhood;
// global CSR copies are exported for products and debugging dumps.
#pragma once

#include "fkldg/coeff_field.hpp"
#include "fkldg/dgspace.hpp"

#include <Eigen/Sparse>

namespace fkldg {

// delta_i = n^T D|_Ki n, gamma = delta1 / (delta1 + delta2),
// eta = eta0 ell^2 * 2 delta1 delta2 / (delta1 + delta2).
struct FacetWeights {
  double gamma = 0.5;
  double eta = 0.0;
};
FacetWeights facet_weights(const Eigen::Matrix2d& D1, const Eigen::Matrix2d& D2, const Vec2& n,
                           double eta0, int degree);

struct AssemblyOptions {
  double theta = -1.0;          // power in the facet mesh-size average
  double eta0 = 1.0;            // penalty scaling
  bool use_facet_count = true;  // include the cell edge count m_K in h(F)
};

// Row blocks of a cell-blocked sparse matrix: rows of cell k couple to the
// scalar dofs of cols[k] (k itself first, then its facet neighbors).
struct BlockRows {
  int block_rows = 0;                  // rows per cell
  int block_cols = 0;                  // cols per neighbor block
  std::vector<std::vector<int>> cols;  // neighbor cell lists
  std::vector<Eigen::MatrixXd> blk;    // block_rows x (block_cols * cols[k].size())

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& y) const;
  Eigen::SparseMatrix<double> to_sparse() const;
};

class LdgSystem {
 public:
  LdgSystem(const DgSpace& space, const CoeffField& coeffs, const AssemblyOptions& opts);

  const DgSpace& space() const { return *space_; }
  const CoeffField& coeffs() const { return *coeffs_; }
  const AssemblyOptions& options() const { return opts_; }

  // Block-diagonal pieces, one matrix per cell.
  const std::vector<Eigen::MatrixXd>& vector_mass() const { return MI_; }
  const std::vector<Eigen::LLT<Eigen::MatrixXd>>& vector_mass_llt() const { return MI_llt_; }
  const std::vector<Eigen::MatrixXd>& diffusion_mass() const { return MD_; }
  const std::vector<Eigen::MatrixXd>& reaction_mass() const { return Ma_; }

  const BlockRows& B() const { return B_; }
  const BlockRows& G() const { return G_; }
  const BlockRows& C() const { return C_; }
  const Eigen::SparseMatrix<double>& J() const { return J_; }
  const Eigen::SparseMatrix<double>& A() const { return A_; }

  // Indexed by global facet id; boundary entries keep the default values.
  const std::vector<double>& facet_h() const { return facet_h_; }
  const std::vector<FacetWeights>& facet_w() const { return facet_wt_; }

  // Discrete LDG gradient of a scalar field: G W reshaped per cell.
  Eigen::VectorXd apply_ldg_gradient(const Eigen::VectorXd& W) const { return G_.apply(W); }

  Eigen::VectorXd apply_MI_inverse(const Eigen::VectorXd& R) const;
  Eigen::VectorXd apply_MD(const Eigen::VectorXd& R) const;

  // Global sparse copies of the block-diagonal masses (for identity checks
  // and matrix dumps).
  Eigen::SparseMatrix<double> vector_mass_sparse() const;
  Eigen::SparseMatrix<double> diffusion_mass_sparse() const;
  Eigen::SparseMatrix<double> reaction_mass_sparse() const;

 private:
  const DgSpace* space_;
  const CoeffField* coeffs_;
  AssemblyOptions opts_;

  std::vector<Eigen::MatrixXd> MI_, MD_, Ma_;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> MI_llt_;
  BlockRows B_, G_, C_;
  Eigen::SparseMatrix<double> J_, A_;
  std::vector<double> facet_h_;
  std::vector<FacetWeights> facet_wt_;
};

}  // namespace fkldg
