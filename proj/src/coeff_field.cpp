// coeff_field.cpp

#include "fkldg/coeff_field.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace fkldg {

CoeffField CoeffField::constant(const PolyMesh& mesh, double alpha, const Eigen::Matrix2d& D) {
  CoeffField c;
  c.alpha_.assign(mesh.n_cells(), alpha);
  c.D_.assign(mesh.n_cells(), D);
  c.validate();
  return c;
}

CoeffField CoeffField::from_regions(const PolyMesh& mesh, const std::map<int, Region>& regions,
                                    const Vec2& fallback_axis) {
  CoeffField c;
  const int nc = mesh.n_cells();
  c.alpha_.resize(nc);
  c.D_.resize(nc);
  for (int k = 0; k < nc; ++k) {
    const auto it = regions.find(mesh.labels[k]);
    if (it == regions.end())
      throw std::runtime_error(
          fmt::format("CoeffField: cell {} has unmapped label {}", k, mesh.labels[k]));
    const Region& r = it->second;
    c.alpha_[k] = r.alpha;
    Eigen::Matrix2d D = r.d_ext * Eigen::Matrix2d::Identity();
    if (r.d_axn != 0.0) {
      Vec2 a = mesh.axonal.empty() ? fallback_axis : mesh.axonal[k];
      const double norm = a.norm();
      if (std::abs(norm - 1.0) > 1e-12) {
        if (norm == 0.0)
          throw std::runtime_error(fmt::format("CoeffField: zero fiber direction on cell {}", k));
        a /= norm;
      }
      D += r.d_axn * a * a.transpose();
    }
    c.D_[k] = D;
  }
  c.validate();
  return c;
}

void CoeffField::validate() const {
  for (size_t k = 0; k < D_.size(); ++k) {
    const Eigen::Matrix2d& D = D_[k];
    if (std::abs(D(0, 1) - D(1, 0)) > 1e-14 * D.norm())
      throw std::runtime_error(fmt::format("CoeffField: diffusion on cell {} not symmetric", k));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(D);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw std::runtime_error(
          fmt::format("CoeffField: diffusion on cell {} not positive definite", k));
    if (!(alpha_[k] >= 0.0))
      throw std::runtime_error(fmt::format("CoeffField: alpha on cell {} negative", k));
  }
}

double CoeffField::alpha_max() const {
  double a = 0.0;
  for (double v : alpha_) a = std::max(a, v);
  return a;
}

double CoeffField::d0() const {
  double d = std::numeric_limits<double>::max();
  for (const Eigen::Matrix2d& D : D_) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(D);
    d = std::min(d, es.eigenvalues().minCoeff());
  }
  return d;
}

}  // namespace fkldg
