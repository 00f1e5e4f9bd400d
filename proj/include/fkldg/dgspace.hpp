// dgspace.hpp
//
// Discontinuous piecewise-polynomial spaces on polygonal meshes. Each cell
// carries scaled monomials on its bounding box, orthonormalized against the
// cell quadrature rule, so local mass matrices are identity to roundoff.
// Scalar dofs are blocked per cell; vector fields use [x-block; y-block]
// within each cell.
#pragma once

#include "fkldg/polymesh.hpp"
#include "fkldg/quadrature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <functional>

namespace fkldg {

class DgSpace {
 public:
  struct CellData {
    QuadRule quad;                        // exact for degree 2l+1
    Eigen::MatrixXd phi;                  // nq x m basis values
    Eigen::MatrixXd dphix, dphiy;         // nq x m basis gradients
    Eigen::MatrixXd coeff;                // m x m monomial coefficients, row per basis function
    Vec2 box_center, box_halfwidth;       // monomial chart xi = (x - center) / halfwidth
    Eigen::MatrixXd mass;                 // quadrature Gram of the basis
    Eigen::LLT<Eigen::MatrixXd> mass_llt;
    double monomial_cond = 0.0;           // condition number of the raw monomial Gram
  };

  struct FacetData {
    QuadRule quad;              // exact for trace degree 2l+1
    Eigen::MatrixXd phi1;       // nq x m traces from k1
    Eigen::MatrixXd phi2;       // nq x m traces from k2, empty on boundary facets
  };

  // Throws unless 1 <= degree <= 8. The mesh must outlive the space.
  DgSpace(const PolyMesh& mesh, int degree);

  const PolyMesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int dofs_per_cell() const { return m_; }
  int n_scalar_dofs() const { return m_ * mesh_->n_cells(); }
  int n_vector_dofs() const { return 2 * n_scalar_dofs(); }
  int scalar_offset(int k) const { return m_ * k; }
  int vector_offset(int k) const { return 2 * m_ * k; }

  const CellData& cell(int k) const { return cells_[k]; }
  const FacetData& facet(int f) const { return facets_[f]; }

  void eval_basis(int k, const Vec2& x, Eigen::VectorXd& vals) const;
  void eval_basis_grad(int k, const Vec2& x, Eigen::VectorXd& dx, Eigen::VectorXd& dy) const;

  double eval_scalar(const Eigen::VectorXd& W, int k, const Vec2& x) const;
  Vec2 eval_scalar_grad(const Eigen::VectorXd& W, int k, const Vec2& x) const;
  Vec2 eval_vector(const Eigen::VectorXd& R, int k, const Vec2& x) const;

  // L2 projections in the quadrature inner product; orthogonality
  // (f - Pf, phi_i) = 0 holds per quadrature by construction.
  Eigen::VectorXd project_scalar(const std::function<double(const Vec2&)>& f) const;
  Eigen::VectorXd project_vector(const std::function<Vec2(const Vec2&)>& f) const;

 private:
  const PolyMesh* mesh_;
  int degree_;
  int m_;
  std::vector<std::pair<int, int>> exponents_;  // graded monomial exponents
  std::vector<CellData> cells_;
  std::vector<FacetData> facets_;

  void monomials(const CellData& cd, const Vec2& x, Eigen::VectorXd& mono) const;
  void monomial_grads(const CellData& cd, const Vec2& x, Eigen::VectorXd& gx,
                      Eigen::VectorXd& gy) const;
};

}  // namespace fkldg
