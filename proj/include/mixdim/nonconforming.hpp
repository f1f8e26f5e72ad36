#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mixdim/elasticity.hpp"
#include "mixdim/mesh.hpp"

namespace mixdim::nonconforming {

// Axis-aligned box occupied by the solid, in the structure's geometry coordinates.
struct OverlapRegion {
  Eigen::VectorXd lower, upper;
  double tol = 1e-10;

  // max over axes of the signed distance to the slab; negative inside.
  double level_set(const Eigen::VectorXd& x) const;
  bool inside(const Eigen::VectorXd& x) const { return level_set(x) < -tol; }
  bool outside(const Eigen::VectorXd& x) const { return level_set(x) > tol; }
};

enum class Label { Standard, Cut, Void };
const char* to_string(Label l);

std::vector<Label> classify(const mesh::Mesh& mesh, const OverlapRegion& region);

// Fraction of the element's measure outside the region (exact for axis-aligned affine elements).
double outside_fraction(const mesh::Mesh& mesh, int e, const OverlapRegion& region);

struct Deactivation {
  std::vector<bool> inactive;           // per basis function / node
  std::vector<double> outside_fraction; // per element
};

// A function is inactive when less than tau of its support measure lies outside the region.
// Throws OverDeactivation when every function of a (non-sliver) cut element is inactive.
Deactivation deactivate(const mesh::Mesh& mesh, const std::vector<Label>& labels, const OverlapRegion& region,
                        double tau);

// Runs kernel with an n_cut-point rule whose points inside the region are dropped.
Eigen::MatrixXd integrate_cut(const mesh::Mesh& mesh, int e, const OverlapRegion& region,
                              const std::function<Eigen::MatrixXd(const elasticity::QuadratureSpec&)>& kernel,
                              int n_cut = 10);

// Quadrature spec used for cut elements.
elasticity::QuadratureSpec cut_rule(const OverlapRegion& region, int n_cut);

}  // namespace mixdim::nonconforming
