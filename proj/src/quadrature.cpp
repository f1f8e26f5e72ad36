#include "mixdim/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include "mixdim/errors.hpp"

namespace mixdim::quad {

namespace {

Rule1D compute_gauss(int n) {
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

}  // namespace

const Rule1D& gauss_legendre(int n) {
  constexpr int kMax = 64;
  if (n < 1 || n > kMax) throw Error(ErrorKind::Config, "Gauss rule size out of range");
  static std::once_flag once;
  static std::vector<Rule1D> rules;
  std::call_once(once, [] {
    rules.resize(kMax + 1);
    for (int k = 1; k <= kMax; ++k) rules[k] = compute_gauss(k);
  });
  return rules[n];
}

TensorRule tensor_rule(int dim, const std::array<int, 3>& points) {
  TensorRule t;
  t.dim = dim;
  const int nx = points[0];
  const int ny = dim > 1 ? points[1] : 1;
  const int nz = dim > 2 ? points[2] : 1;
  const auto& rx = gauss_legendre(nx);
  const auto& ry = gauss_legendre(dim > 1 ? ny : 1);
  const auto& rz = gauss_legendre(dim > 2 ? nz : 1);
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        std::array<double, 3> x{rx.x[i], dim > 1 ? ry.x[j] : 0.0, dim > 2 ? rz.x[k] : 0.0};
        double w = rx.w[i] * (dim > 1 ? ry.w[j] : 1.0) * (dim > 2 ? rz.w[k] : 1.0);
        t.x.push_back(x);
        t.w.push_back(w);
      }
    }
  }
  return t;
}

TensorRule tensor_rule(int dim, int points) { return tensor_rule(dim, {points, points, points}); }

}  // namespace mixdim::quad
