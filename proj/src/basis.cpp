#include "mixdim/basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mixdim/errors.hpp"
#include "mixdim/quadrature.hpp"

namespace mixdim::basis {

namespace {

constexpr double kTinyDenominator = 1e-14;

double safe_div(double num, double den) { return std::abs(den) < kTinyDenominator ? 0.0 : num / den; }

}  // namespace

KnotVector::KnotVector(std::vector<double> knots, int degree, std::vector<double> weights)
    : knots_(std::move(knots)), weights_(std::move(weights)), p_(degree) {
  if (p_ < 0) throw Error(ErrorKind::Config, "negative spline degree");
  const int m = static_cast<int>(knots_.size());
  if (m < 2 * (p_ + 1)) throw Error(ErrorKind::Config, "knot vector too short for degree");
  for (int i = 0; i + 1 < m; ++i) {
    if (!(knots_[i] <= knots_[i + 1])) throw Error(ErrorKind::Config, "knots must be non-decreasing");
  }
  auto count = [&](double v) {
    return static_cast<int>(std::count(knots_.begin(), knots_.end(), v));
  };
  if (count(knots_.front()) != p_ + 1 || count(knots_.back()) != p_ + 1) {
    throw Error(ErrorKind::Config, "knot vector must be open (end knots repeated exactly p+1 times)");
  }
  if (knots_.front() == knots_.back()) throw Error(ErrorKind::Config, "empty parameter range");
  const int n = num_basis();
  if (!weights_.empty()) {
    if (static_cast<int>(weights_.size()) != n) {
      throw Error(ErrorKind::Config, "weights must have one entry per basis function");
    }
    for (double w : weights_) {
      if (!(w > 0.0)) throw Error(ErrorKind::Config, "weights must be positive");
    }
    // Unit weights are the polynomial case.
    if (std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 1.0; })) weights_.clear();
  }
  for (int i = p_; i < n; ++i) {
    if (knots_[i] < knots_[i + 1]) spans_.push_back(i);
  }
}

KnotVector KnotVector::open_uniform(int degree, int spans, double a, double b) {
  if (degree < 0) throw Error(ErrorKind::Config, "negative spline degree");
  if (spans < 1) throw Error(ErrorKind::Config, "need at least one knot span");
  std::vector<double> k;
  for (int i = 0; i < degree; ++i) k.push_back(a);
  for (int i = 0; i <= spans; ++i) k.push_back(i == spans ? b : a + (b - a) * i / spans);
  for (int i = 0; i < degree; ++i) k.push_back(b);
  return KnotVector(std::move(k), degree);
}

std::vector<double> KnotVector::greville() const {
  std::vector<double> g(static_cast<size_t>(num_basis()));
  for (int i = 0; i < num_basis(); ++i) {
    if (p_ == 0) {
      g[i] = 0.5 * (knots_[i] + knots_[i + 1]);
      continue;
    }
    double s = 0.0;
    for (int j = 1; j <= p_; ++j) s += knots_[i + j];
    g[i] = s / p_;
  }
  return g;
}

int find_span(const KnotVector& kv, double xi) {
  const double a = kv.front(), b = kv.back();
  const double tol = 1e-12 * (b - a);
  if (!(xi >= a - tol && xi <= b + tol)) {
    std::ostringstream os;
    os << "parameter " << xi << " outside [" << a << ", " << b << "]";
    throw Error(ErrorKind::Domain, os.str());
  }
  const auto& spans = kv.spans();
  if (xi >= kv.knot(spans.back())) return spans.back();
  if (xi <= a) return spans.front();
  // Last span whose left knot is <= xi.
  auto it = std::upper_bound(spans.begin(), spans.end(), xi,
                             [&](double v, int s) { return v < kv.knot(s); });
  return *(it - 1);
}

BasisValues eval_basis_in_span(const KnotVector& kv, int span, double xi, int deriv_order) {
  if (deriv_order < 0 || deriv_order > 2) {
    throw Error(ErrorKind::UnsupportedOrder, "derivative order must be 0, 1 or 2");
  }
  const int p = kv.degree();
  const auto& U = kv.knots();
  const int nd = std::min(deriv_order, p);

  // Piegl & Tiller style triangular table of basis values and knot differences.
  std::vector<double> left(p + 1), right(p + 1);
  std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1, 0.0));
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = xi - U[span + 1 - j];
    right[j] = U[span + j] - xi;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = safe_div(ndu[r][j - 1], ndu[j][r]);
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }

  std::vector<std::array<double, 3>> ders(p + 1, {0.0, 0.0, 0.0});
  for (int j = 0; j <= p; ++j) ders[j][0] = ndu[j][p];

  std::vector<std::vector<double>> a(2, std::vector<double>(p + 1, 0.0));
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= nd; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a[s2][0] = safe_div(a[s1][0], ndu[pk + 1][rk]);
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = safe_div(a[s1][j] - a[s1][j - 1], ndu[pk + 1][rk + j]);
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = safe_div(-a[s1][k - 1], ndu[pk + 1][r]);
        d += a[s2][k] * ndu[r][pk];
      }
      ders[r][k] = d;
      std::swap(s1, s2);
    }
  }
  double fac = p;
  for (int k = 1; k <= nd; ++k) {
    for (int j = 0; j <= p; ++j) ders[j][k] *= fac;
    fac *= (p - k);
  }

  BasisValues out;
  out.span = span;
  out.first = span - p;
  out.order = deriv_order;
  out.N.resize(p + 1);
  out.dN = Eigen::VectorXd::Zero(p + 1);
  out.d2N = Eigen::VectorXd::Zero(p + 1);
  for (int j = 0; j <= p; ++j) {
    out.N[j] = ders[j][0];
    if (deriv_order >= 1) out.dN[j] = ders[j][1];
    if (deriv_order >= 2) out.d2N[j] = ders[j][2];
  }

  if (kv.rational()) {
    Eigen::VectorXd w(p + 1);
    for (int j = 0; j <= p; ++j) w[j] = kv.weight(out.first + j);
    const Eigen::VectorXd wN = w.cwiseProduct(out.N);
    const Eigen::VectorXd wN1 = w.cwiseProduct(out.dN);
    const Eigen::VectorXd wN2 = w.cwiseProduct(out.d2N);
    const double W = wN.sum(), W1 = wN1.sum(), W2 = wN2.sum();
    const Eigen::VectorXd R = wN / W;
    const Eigen::VectorXd R1 = (wN1 - R * W1) / W;
    const Eigen::VectorXd R2 = (wN2 - 2.0 * R1 * W1 - R * W2) / W;
    out.N = R;
    if (deriv_order >= 1) out.dN = R1;
    if (deriv_order >= 2) out.d2N = R2;
  }
  return out;
}

BasisValues eval_basis(const KnotVector& kv, double xi, int deriv_order) {
  if (deriv_order < 0 || deriv_order > 2) {
    throw Error(ErrorKind::UnsupportedOrder, "derivative order must be 0, 1 or 2");
  }
  const int span = find_span(kv, xi);
  const double x = std::clamp(xi, kv.front(), kv.back());
  return eval_basis_in_span(kv, span, x, deriv_order);
}

Projection least_squares_project(const KnotVector& kv, const std::function<double(double)>& target,
                                 const std::vector<bool>& span_mask) {
  const auto& spans = kv.spans();
  if (!span_mask.empty() && span_mask.size() != spans.size()) {
    throw Error(ErrorKind::Config, "span mask length does not match the number of knot spans");
  }
  const int p = kv.degree();
  const int n = kv.num_basis();
  std::vector<int> local(static_cast<size_t>(n), -1);
  Projection out;
  for (size_t s = 0; s < spans.size(); ++s) {
    if (!span_mask.empty() && !span_mask[s]) continue;
    for (int j = 0; j <= p; ++j) {
      const int g = spans[s] - p + j;
      if (local[g] < 0) {
        local[g] = static_cast<int>(out.indices.size());
        out.indices.push_back(g);
      }
    }
  }
  const int m = static_cast<int>(out.indices.size());
  if (m == 0) throw Error(ErrorKind::Rank, "projection mask selects no knot span");

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  const auto& rule = quad::gauss_legendre(p + 1);
  for (size_t s = 0; s < spans.size(); ++s) {
    if (!span_mask.empty() && !span_mask[s]) continue;
    const double a = kv.knot(spans[s]), b = kv.knot(spans[s] + 1);
    const double jac = 0.5 * (b - a);
    for (size_t q = 0; q < rule.x.size(); ++q) {
      const double xi = a + (rule.x[q] + 1.0) * jac;
      const auto bv = eval_basis_in_span(kv, spans[s], xi, 0);
      const double f = target(xi);
      const double w = rule.w[q] * jac;
      for (int i = 0; i <= p; ++i) {
        const int li = local[bv.first + i];
        rhs[li] += w * bv.N[i] * f;
        for (int j = 0; j <= p; ++j) G(li, local[bv.first + j]) += w * bv.N[i] * bv.N[j];
      }
    }
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
  const auto d = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || d.minCoeff() <= 1e-13 * std::max(d.maxCoeff(), 1e-300)) {
    throw Error(ErrorKind::Rank, "singular Gram matrix in least-squares projection");
  }
  out.values = ldlt.solve(rhs);
  return out;
}

}  // namespace mixdim::basis
