#include "mixdim/linear_solver.hpp"

#include <Eigen/SparseCholesky>

#include "mixdim/errors.hpp"

#ifdef MIXDIM_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

namespace mixdim {

struct SparseCholesky::Impl {
#ifdef MIXDIM_HAVE_CHOLMOD
  Impl() {
    // keep CHOLMOD quiet about non-positive pivots; we report those ourselves
    llt.cholmod().print = 0;
    llt.cholmod().error_handler = nullptr;
  }
  Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower> llt;
#else
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower> llt;
#endif
  bool ok = false;
};

SparseCholesky::SparseCholesky() : impl_(std::make_unique<Impl>()) {}
SparseCholesky::~SparseCholesky() = default;

bool SparseCholesky::factor(const SparseMatrix& A) {
  impl_->llt.compute(A);
  impl_->ok = impl_->llt.info() == Eigen::Success;
  return impl_->ok;
}

Eigen::VectorXd SparseCholesky::solve(const Eigen::VectorXd& b) const {
  if (!impl_->ok) throw Error(ErrorKind::Internal, "solve called without a valid factorization");
  return impl_->llt.solve(b);
}

Eigen::MatrixXd SparseCholesky::solve(const Eigen::MatrixXd& B) const {
  if (!impl_->ok) throw Error(ErrorKind::Internal, "solve called without a valid factorization");
  return impl_->llt.solve(B);
}

std::string SparseCholesky::backend() {
#ifdef MIXDIM_HAVE_CHOLMOD
  return "cholmod-supernodal";
#else
  return "eigen-simplicial";
#endif
}

}  // namespace mixdim
