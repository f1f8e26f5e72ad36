#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace mixdim::basis {

// Open knot vector with optional rational weights (one per basis function).
class KnotVector {
 public:
  KnotVector() = default;
  KnotVector(std::vector<double> knots, int degree, std::vector<double> weights = {});

  // Open uniform knots on [a, b] split into `spans` equal pieces.
  static KnotVector open_uniform(int degree, int spans, double a, double b);

  int degree() const { return p_; }
  int num_basis() const { return static_cast<int>(knots_.size()) - p_ - 1; }
  const std::vector<double>& knots() const { return knots_; }
  double knot(int i) const { return knots_[static_cast<size_t>(i)]; }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }

  bool rational() const { return !weights_.empty(); }
  double weight(int i) const { return weights_.empty() ? 1.0 : weights_[static_cast<size_t>(i)]; }
  const std::vector<double>& weights() const { return weights_; }

  // Indices i with knots[i] < knots[i+1], in increasing order.
  const std::vector<int>& spans() const { return spans_; }
  int num_spans() const { return static_cast<int>(spans_.size()); }

  std::vector<double> greville() const;

 private:
  std::vector<double> knots_;
  std::vector<double> weights_;
  std::vector<int> spans_;
  int p_ = 0;
};

int find_span(const KnotVector& kv, double xi);

struct BasisValues {
  int span = 0;
  int first = 0;  // global index of the first nonzero function
  int order = 0;  // highest derivative filled in
  Eigen::VectorXd N, dN, d2N;
};

// Values and derivatives of the p+1 functions nonzero on the span holding xi.
BasisValues eval_basis(const KnotVector& kv, double xi, int deriv_order);

// Same, with the span given explicitly. xi may lie outside the span; the
// polynomial piece of that span is then extended (used by Newton inversion).
BasisValues eval_basis_in_span(const KnotVector& kv, int span, double xi, int deriv_order);

struct Projection {
  std::vector<int> indices;  // basis functions touched by the masked spans
  Eigen::VectorXd values;    // control values, aligned with indices
};

// L2 projection of target onto the spline space over the spans selected by
// span_mask (one flag per entry of kv.spans(); empty selects every span).
Projection least_squares_project(const KnotVector& kv, const std::function<double(double)>& target,
                                 const std::vector<bool>& span_mask = {});

}  // namespace mixdim::basis
