#pragma once

#include <array>
#include <vector>

namespace mixdim::quad {

struct Rule1D {
  std::vector<double> x;  // abscissae on [-1, 1]
  std::vector<double> w;
};

// Gauss-Legendre rule with n points (n >= 1), computed once and cached.
const Rule1D& gauss_legendre(int n);

struct TensorRule {
  std::vector<std::array<double, 3>> x;  // unused trailing coordinates are zero
  std::vector<double> w;
  int dim = 0;
};

TensorRule tensor_rule(int dim, const std::array<int, 3>& points);
TensorRule tensor_rule(int dim, int points);

}  // namespace mixdim::quad
