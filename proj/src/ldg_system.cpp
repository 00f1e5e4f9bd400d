// ldg_system.cpp

#include "fkldg/ldg_system.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace fkldg {

FacetWeights facet_weights(const Eigen::Matrix2d& D1, const Eigen::Matrix2d& D2, const Vec2& n,
                           double eta0, int degree) {
  const double d1 = n.dot(D1 * n);
  const double d2 = n.dot(D2 * n);
  if (d1 <= 0.0 || d2 <= 0.0)
    throw std::runtime_error("facet_weights: normal diffusion components must be positive");
  FacetWeights w;
  w.gamma = d1 / (d1 + d2);
  w.eta = eta0 * degree * degree * 2.0 * d1 * d2 / (d1 + d2);
  return w;
}

Eigen::VectorXd BlockRows::apply(const Eigen::VectorXd& x) const {
  const int nc = static_cast<int>(blk.size());
  Eigen::VectorXd y(static_cast<long>(nc) * block_rows);
  Eigen::VectorXd gather;
  for (int k = 0; k < nc; ++k) {
    const auto& nb = cols[k];
    gather.resize(static_cast<long>(nb.size()) * block_cols);
    for (size_t j = 0; j < nb.size(); ++j)
      gather.segment(j * block_cols, block_cols) = x.segment(nb[j] * block_cols, block_cols);
    y.segment(static_cast<long>(k) * block_rows, block_rows) = blk[k] * gather;
  }
  return y;
}

Eigen::VectorXd BlockRows::apply_transpose(const Eigen::VectorXd& y) const {
  const int nc = static_cast<int>(blk.size());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<long>(nc) * block_cols);
  for (int k = 0; k < nc; ++k) {
    const auto& nb = cols[k];
    const Eigen::VectorXd local =
        blk[k].transpose() * y.segment(static_cast<long>(k) * block_rows, block_rows);
    for (size_t j = 0; j < nb.size(); ++j)
      x.segment(nb[j] * block_cols, block_cols) += local.segment(j * block_cols, block_cols);
  }
  return x;
}

Eigen::SparseMatrix<double> BlockRows::to_sparse() const {
  const int nc = static_cast<int>(blk.size());
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < nc; ++k)
    for (size_t j = 0; j < cols[k].size(); ++j)
      for (int c = 0; c < block_cols; ++c)
        for (int r = 0; r < block_rows; ++r)
          trips.emplace_back(k * block_rows + r, cols[k][j] * block_cols + c,
                             blk[k](r, j * block_cols + c));
  Eigen::SparseMatrix<double> S(static_cast<long>(nc) * block_rows,
                                static_cast<long>(nc) * block_cols);
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

LdgSystem::LdgSystem(const DgSpace& space, const CoeffField& coeffs, const AssemblyOptions& opts)
    : space_(&space), coeffs_(&coeffs), opts_(opts) {
  const PolyMesh& mesh = space.mesh();
  const int nc = mesh.n_cells();
  const int m = space.dofs_per_cell();
  const int nf = static_cast<int>(mesh.facets.size());

  // Block-diagonal masses.
  MI_.resize(nc);
  MD_.resize(nc);
  Ma_.resize(nc);
  MI_llt_.resize(nc);
  for (int k = 0; k < nc; ++k) {
    const Eigen::MatrixXd& Ms = space.cell(k).mass;
    MI_[k] = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    MI_[k].topLeftCorner(m, m) = Ms;
    MI_[k].bottomRightCorner(m, m) = Ms;
    MI_llt_[k].compute(MI_[k]);
    if (MI_llt_[k].info() != Eigen::Success)
      throw std::runtime_error(fmt::format("LdgSystem: vector mass on cell {} not SPD", k));
    const Eigen::Matrix2d& D = coeffs.diffusion(k);
    MD_[k] = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    MD_[k].topLeftCorner(m, m) = D(0, 0) * Ms;
    MD_[k].topRightCorner(m, m) = D(0, 1) * Ms;
    MD_[k].bottomLeftCorner(m, m) = D(1, 0) * Ms;
    MD_[k].bottomRightCorner(m, m) = D(1, 1) * Ms;
    Ma_[k] = coeffs.alpha(k) * Ms;
  }

  // Facet weights and mesh-size values.
  facet_wt_.assign(nf, FacetWeights{});
  facet_h_.assign(nf, 0.0);
  for (int f = 0; f < nf; ++f) {
    const Facet& fc = mesh.facets[f];
    if (!fc.interior) continue;
    facet_wt_[f] = facet_weights(coeffs.diffusion(fc.k1), coeffs.diffusion(fc.k2), fc.normal,
                                 opts.eta0, space.degree());
    facet_h_[f] =
        mesh.mesh_size_on_facet(f, opts.theta, facet_wt_[f].eta, opts.use_facet_count);
    if (!(facet_h_[f] > 0.0))
      throw std::runtime_error(fmt::format("LdgSystem: nonpositive mesh size on facet {}", f));
  }

  // Neighbor lists: the cell itself first, then facet neighbors ascending.
  B_.block_rows = 2 * m;
  B_.block_cols = m;
  B_.cols.resize(nc);
  for (int k = 0; k < nc; ++k) {
    std::vector<int> nb;
    for (int f : mesh.cell_facets[k]) {
      const Facet& fc = mesh.facets[f];
      if (fc.interior) nb.push_back(fc.k1 == k ? fc.k2 : fc.k1);
    }
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    B_.cols[k] = {k};
    B_.cols[k].insert(B_.cols[k].end(), nb.begin(), nb.end());
  }
  B_.blk.resize(nc);
  for (int k = 0; k < nc; ++k)
    B_.blk[k] = Eigen::MatrixXd::Zero(2 * m, m * static_cast<int>(B_.cols[k].size()));

  auto col_pos = [&](int row_cell, int col_cell) {
    const auto& nb = B_.cols[row_cell];
    const auto it = std::find(nb.begin(), nb.end(), col_cell);
    return static_cast<int>(it - nb.begin()) * m;
  };

  // Volume gradient term (grad_h w, r).
  for (int k = 0; k < nc; ++k) {
    const auto& cd = space.cell(k);
    Eigen::Map<const Eigen::VectorXd> w(cd.quad.weights.data(), cd.quad.size());
    B_.blk[k].block(0, 0, m, m) = cd.phi.transpose() * w.asDiagonal() * cd.dphix;
    B_.blk[k].block(m, 0, m, m) = cd.phi.transpose() * w.asDiagonal() * cd.dphiy;
  }

  // Facet terms of B and the jump penalization J.
  std::vector<Eigen::Triplet<double>> jtrips;
  for (int f = 0; f < nf; ++f) {
    const Facet& fc = mesh.facets[f];
    if (!fc.interior) continue;
    const auto& fd = space.facet(f);
    Eigen::Map<const Eigen::VectorXd> w(fd.quad.weights.data(), fd.quad.size());
    const Eigen::MatrixXd G11 = fd.phi1.transpose() * w.asDiagonal() * fd.phi1;
    const Eigen::MatrixXd G12 = fd.phi1.transpose() * w.asDiagonal() * fd.phi2;
    const Eigen::MatrixXd G22 = fd.phi2.transpose() * w.asDiagonal() * fd.phi2;
    const double gamma = facet_wt_[f].gamma;
    const Vec2 n = fc.normal;
    const int k1 = fc.k1, k2 = fc.k2;

    // -(jump(w), avg(r)) with avg = gamma r|k1 + (1-gamma) r|k2 and the jump
    // signed along n (pointing k1 -> k2).
    for (int p = 0; p < 2; ++p) {
      const double np = n[p];
      B_.blk[k1].block(p * m, col_pos(k1, k1), m, m) -= gamma * np * G11;
      B_.blk[k1].block(p * m, col_pos(k1, k2), m, m) += gamma * np * G12;
      B_.blk[k2].block(p * m, col_pos(k2, k1), m, m) -= (1.0 - gamma) * np * G12.transpose();
      B_.blk[k2].block(p * m, col_pos(k2, k2), m, m) += (1.0 - gamma) * np * G22;
    }

    const double hinv = 1.0 / facet_h_[f];
    for (int a = 0; a < m; ++a)
      for (int c = 0; c < m; ++c) {
        jtrips.emplace_back(k1 * m + a, k1 * m + c, hinv * G11(a, c));
        jtrips.emplace_back(k1 * m + a, k2 * m + c, -hinv * G12(a, c));
        jtrips.emplace_back(k2 * m + a, k1 * m + c, -hinv * G12(c, a));
        jtrips.emplace_back(k2 * m + a, k2 * m + c, hinv * G22(a, c));
      }
  }
  J_.resize(space.n_scalar_dofs(), space.n_scalar_dofs());
  J_.setFromTriplets(jtrips.begin(), jtrips.end());

  // G = M_I^-1 B and C = M_D G share the sparsity of B.
  G_ = B_;
  C_ = B_;
  for (int k = 0; k < nc; ++k) {
    G_.blk[k] = MI_llt_[k].solve(B_.blk[k]);
    C_.blk[k] = MD_[k] * G_.blk[k];
  }

  // A = M_a + G^T C + J, assembled once; its pattern (all distance-2 cell
  // pairs plus full diagonal blocks) also serves the Newton matrix.
  std::vector<Eigen::Triplet<double>> atrips;
  for (Eigen::Index o = 0; o < J_.outerSize(); ++o)
    for (Eigen::SparseMatrix<double>::InnerIterator it(J_, o); it; ++it)
      atrips.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < nc; ++k) {
    for (int a = 0; a < m; ++a)
      for (int c = 0; c < m; ++c) atrips.emplace_back(k * m + a, k * m + c, Ma_[k](a, c));
    const Eigen::MatrixXd Q = G_.blk[k].transpose() * C_.blk[k];
    const auto& nb = B_.cols[k];
    for (size_t i = 0; i < nb.size(); ++i)
      for (size_t j = 0; j < nb.size(); ++j)
        for (int a = 0; a < m; ++a)
          for (int c = 0; c < m; ++c)
            atrips.emplace_back(nb[i] * m + a, nb[j] * m + c,
                                Q(static_cast<int>(i) * m + a, static_cast<int>(j) * m + c));
  }
  A_.resize(space.n_scalar_dofs(), space.n_scalar_dofs());
  A_.setFromTriplets(atrips.begin(), atrips.end());
}

Eigen::VectorXd LdgSystem::apply_MI_inverse(const Eigen::VectorXd& R) const {
  const int nc = space_->mesh().n_cells();
  const int bs = 2 * space_->dofs_per_cell();
  Eigen::VectorXd out(R.size());
  for (int k = 0; k < nc; ++k)
    out.segment(static_cast<long>(k) * bs, bs) =
        MI_llt_[k].solve(R.segment(static_cast<long>(k) * bs, bs));
  return out;
}

Eigen::VectorXd LdgSystem::apply_MD(const Eigen::VectorXd& R) const {
  const int nc = space_->mesh().n_cells();
  const int bs = 2 * space_->dofs_per_cell();
  Eigen::VectorXd out(R.size());
  for (int k = 0; k < nc; ++k)
    out.segment(static_cast<long>(k) * bs, bs) =
        MD_[k] * R.segment(static_cast<long>(k) * bs, bs);
  return out;
}

namespace {
Eigen::SparseMatrix<double> blockdiag_sparse(const std::vector<Eigen::MatrixXd>& blocks) {
  std::vector<Eigen::Triplet<double>> trips;
  long n = 0;
  for (const auto& b : blocks) n += b.rows();
  long off = 0;
  for (const auto& b : blocks) {
    for (int r = 0; r < b.rows(); ++r)
      for (int c = 0; c < b.cols(); ++c) trips.emplace_back(off + r, off + c, b(r, c));
    off += b.rows();
  }
  Eigen::SparseMatrix<double> S(n, n);
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}
}  // namespace

Eigen::SparseMatrix<double> LdgSystem::vector_mass_sparse() const { return blockdiag_sparse(MI_); }
Eigen::SparseMatrix<double> LdgSystem::diffusion_mass_sparse() const {
  return blockdiag_sparse(MD_);
}
Eigen::SparseMatrix<double> LdgSystem::reaction_mass_sparse() const {
  return blockdiag_sparse(Ma_);
}

}  // namespace fkldg
