#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mixdim/mesh.hpp"

namespace mixdim::elasticity {

struct Material {
  double E = 1.0;
  double nu = 0.0;
  double k_shear = 5.0 / 6.0;
  double thickness = 1.0;  // plate thickness, beam height, plane-stress thickness
  double width = 1.0;      // beam section width

  double G() const { return E / (2.0 * (1.0 + nu)); }
  void validate() const;  // throws Config
};

// Voigt order: 3D [xx, yy, zz, xy, yz, xz], 2D plane stress [xx, yy, xy]; engineering shears.
int voigt_size(int dim);
Eigen::MatrixXd constitutive_solid(const Material& m, int dim);

// Quadrature used by element kernels. points == 0 means p+1 per direction.
// Points for which skip(x) is true (x in mesh geometry coordinates) are dropped.
struct QuadratureSpec {
  int points = 0;
  std::function<bool(const Eigen::VectorXd&)> skip;
};

// Calls f(shape, weight * detJ) at every retained quadrature point; returns the number of points used.
int integrate(const mesh::Mesh& mesh, int e, const QuadratureSpec& q, int deriv_order,
              const std::function<void(const mesh::ShapeValues&, double)>& f);

// Facet quadrature: f(shape, outward unit normal, weight * measure density).
void integrate_facet(const mesh::Mesh& mesh, const mesh::Facet& facet, int points, int deriv_order,
                     const std::function<void(const mesh::ShapeValues&, const Eigen::VectorXd&, double)>& f);

// Displacement interpolation (d x d*nen) and strain-displacement (voigt x d*nen), node-major.
Eigen::MatrixXd displacement_matrix(const mesh::ShapeValues& sv, int dim);
Eigen::MatrixXd strain_displacement(const mesh::ShapeValues& sv, int dim);
Eigen::MatrixXd strain_displacement_solid(const mesh::Mesh& mesh, int e, const Eigen::VectorXd& parent);

Eigen::MatrixXd stiffness_solid(const mesh::Mesh& mesh, int e, const Material& m, const QuadratureSpec& q = {});

// Constant body force per unit volume.
Eigen::VectorXd body_force(const mesh::Mesh& mesh, int e, const Eigen::VectorXd& b, const Material& m,
                           const QuadratureSpec& q = {});

// Consistent nodal forces of a traction t(x) over boundary facets; returns a
// vector over all mesh DOFs (dim * num_nodes).
Eigen::VectorXd traction_force(const mesh::Mesh& mesh, const std::vector<mesh::Facet>& facets,
                               const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& traction,
                               const Material& m);

}  // namespace mixdim::elasticity
