#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <string>

namespace mixdim {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Sparse LL^T of a symmetric matrix (lower triangle used). CHOLMOD supernodal
// when built with it, Eigen's simplicial factorization otherwise.
class SparseCholesky {
 public:
  SparseCholesky();
  ~SparseCholesky();
  SparseCholesky(const SparseCholesky&) = delete;
  SparseCholesky& operator=(const SparseCholesky&) = delete;

  // False when the matrix is not (numerically) positive definite.
  bool factor(const SparseMatrix& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& B) const;

  static std::string backend();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mixdim
