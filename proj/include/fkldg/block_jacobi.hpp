// block_jacobi.hpp
//
// Cell-block Jacobi preconditioner for Eigen's iterative solvers, mirroring
// the interface of Eigen::DiagonalPreconditioner. The block size must be set
// before compute().
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

namespace fkldg {

class BlockJacobiPreconditioner {
  using Vector = Eigen::VectorXd;

 public:
  using Scalar = double;
  using StorageIndex = typename Eigen::SparseMatrix<double>::StorageIndex;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  BlockJacobiPreconditioner() = default;

  void setBlockSize(int bs) { bs_ = bs; }

  Eigen::Index rows() const { return n_; }
  Eigen::Index cols() const { return n_; }

  template <typename MatType>
  BlockJacobiPreconditioner& analyzePattern(const MatType&) {
    return *this;
  }

  template <typename MatType>
  BlockJacobiPreconditioner& factorize(const MatType& mat) {
    n_ = mat.rows();
    const int nb = static_cast<int>(n_ / bs_);
    lus_.resize(nb);
    Eigen::MatrixXd blk(bs_, bs_);
    for (int k = 0; k < nb; ++k) {
      blk.setZero();
      const int base = k * bs_;
      for (int c = 0; c < bs_; ++c)
        for (typename MatType::InnerIterator it(mat, base + c); it; ++it) {
          const auto r = it.row() - base;
          if (r >= 0 && r < bs_) blk(r, c) = it.value();
        }
      lus_[k].compute(blk);
    }
    initialized_ = true;
    return *this;
  }

  template <typename MatType>
  BlockJacobiPreconditioner& compute(const MatType& mat) {
    return factorize(mat);
  }

  template <typename Rhs, typename Dest>
  void _solve_impl(const Rhs& b, Dest& x) const {
    x.resize(b.rows());
    for (size_t k = 0; k < lus_.size(); ++k)
      x.segment(k * bs_, bs_) = lus_[k].solve(b.segment(k * bs_, bs_));
  }

  template <typename Rhs>
  const Eigen::Solve<BlockJacobiPreconditioner, Rhs> solve(
      const Eigen::MatrixBase<Rhs>& b) const {
    eigen_assert(initialized_ && "BlockJacobiPreconditioner not initialized");
    return Eigen::Solve<BlockJacobiPreconditioner, Rhs>(*this, b.derived());
  }

  Eigen::ComputationInfo info() const { return Eigen::Success; }

 private:
  int bs_ = 1;
  Eigen::Index n_ = 0;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lus_;
  bool initialized_ = false;
};

}  // namespace fkldg
