// coeff_field.hpp
//
// Piecewise-constant reaction rate alpha and symmetric positive definite
// diffusion tensor D. Anisotropy enters as D = d_ext I + d_axn a a^T with a
// unit fiber direction per cell.
#pragma once

#include "fkldg/polymesh.hpp"

#include <Eigen/Dense>
#include <map>
#include <vector>

namespace fkldg {

class CoeffField {
 public:
  struct Region {
    double alpha = 0.0;
    double d_ext = 0.0;
    double d_axn = 0.0;  // magnitude along the fiber direction, 0 for isotropic regions
  };

  static CoeffField constant(const PolyMesh& mesh, double alpha, const Eigen::Matrix2d& D);

  // Per-label regions; anisotropic regions take the fiber direction from
  // mesh.axonal (or `fallback_axis` when the mesh carries none).
  static CoeffField from_regions(const PolyMesh& mesh, const std::map<int, Region>& regions,
                                 const Vec2& fallback_axis = Vec2(1.0, 0.0));

  double alpha(int k) const { return alpha_[k]; }
  const Eigen::Matrix2d& diffusion(int k) const { return D_[k]; }

  double alpha_max() const;
  // Uniform ellipticity constant: smallest eigenvalue of D over all cells.
  double d0() const;

 private:
  CoeffField() = default;
  void validate() const;  // symmetry and positive definiteness per cell

  std::vector<double> alpha_;
  std::vector<Eigen::Matrix2d> D_;
};

}  // namespace fkldg
