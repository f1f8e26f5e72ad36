#pragma once

#include <Eigen/Dense>
#include <initializer_list>

#include "mixdim/errors.hpp"

namespace testing_util {

// Kind of the mixdim::Error raised by f, Internal when nothing is thrown.
template <class F>
mixdim::ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const mixdim::Error& e) {
    return e.kind();
  }
  return mixdim::ErrorKind::Internal;
}

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<int>(v.size()));
  int i = 0;
  for (double a : v) x[i++] = a;
  return x;
}

inline bool symmetric(const Eigen::MatrixXd& A, double rel = 1e-12) {
  return (A - A.transpose()).cwiseAbs().maxCoeff() <= rel * std::max(1.0, A.cwiseAbs().maxCoeff());
}

inline double min_eig(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
  return es.eigenvalues().minCoeff();
}

}  // namespace testing_util
