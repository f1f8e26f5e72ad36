#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "mixdim/elasticity.hpp"
#include "mixdim/linear_solver.hpp"
#include "mixdim/mesh.hpp"
#include "mixdim/structural.hpp"

namespace mixdim::coupling {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Solid boundary faces lying on the plane through `point` whose outward
// normal equals `normal` belong to the interface.
struct PlaneLocator {
  Eigen::VectorXd point;
  Eigen::VectorXd normal;
  double tol = 1e-8;  // relative to the facet diameter
};

struct InterfacePoint {
  int solid_element = -1;
  Eigen::VectorXd solid_parent;
  int struct_element = -1;
  Eigen::VectorXd struct_parent;
  Eigen::VectorXd x;       // global coordinates
  Eigen::VectorXd normal;  // unit outward normal of the solid
  double weight = 0.0;     // quadrature weight times measure density
  double offset = 0.0;     // ybar for beams, x3 for plates
};

struct Interface {
  std::vector<InterfacePoint> points;
  std::vector<mesh::Facet> facets;
  double measure() const;
};

// Geometry coordinates of a global point in the structure's frame; `offset`
// receives the cross-section coordinate (ybar or x3).
Eigen::VectorXd structure_coordinates(const mesh::Mesh& structure, const Eigen::VectorXd& x, double* offset);

// points_per_dir == 0 selects p_solid + p_struct + 1.
Interface build_interface(const mesh::Mesh& solid, const mesh::Mesh& structure,
                          const std::vector<PlaneLocator>& locators, int points_per_dir = 0);

enum class Reduction { None, Kirchhoff, Mindlin };

// Matrix form of the normal: (matrix) * (Voigt stress) = traction.
Eigen::MatrixXd normal_matrix(const Eigen::VectorXd& n, int dim, Reduction r = Reduction::None);

// Everything a coupling kernel needs on both sides of one interface point.
struct PointOperators {
  Eigen::MatrixXd Us, Ub;  // displacement (global axes) per local DOF
  Eigen::MatrixXd Ss, Sb;  // stress in the coupling stress space per local DOF
  Eigen::MatrixXd Nm;      // normal matrix in that stress space
  std::vector<int> solid_dofs, struct_dofs;  // global indices
};

struct Context {
  const mesh::Mesh* solid = nullptr;
  elasticity::Material solid_material;
  const mesh::Mesh* structure = nullptr;
  structural::Theory theory = structural::Theory::Timoshenko;
  elasticity::Material struct_material;
  int solid_offset = 0;   // first global DOF of the solid
  int struct_offset = 0;  // first global DOF of the structure
};

PointOperators point_operators(const Context& ctx, const InterfacePoint& ip);

// Structure side alone: displacement in global axes and stress in the
// coupling stress space (beams: global 2D Voigt; plates: 3 or 5 components).
struct StructureOperators {
  Eigen::MatrixXd U, S;
};
StructureOperators structure_operators(const mesh::Mesh& structure, structural::Theory t,
                                       const elasticity::Material& m, int e, const Eigen::VectorXd& parent,
                                       double offset);

struct CouplingTerms {
  Triplets nitsche;        // K^n + (K^n)^T
  Triplets stabilization;  // K^st without the factor alpha
};

// alpha only enters through the caller; it is validated here (alpha <= 0 -> Config).
CouplingTerms assemble_coupling(const Context& ctx, const Interface& iface, double alpha);

// Interface flux matrix H used by the stabilization estimate.
Triplets assemble_flux(const Context& ctx, const Interface& iface);

struct AlphaEstimate {
  double alpha = 0.0;
  double lambda1 = 0.0;
  int iterations = 0;
  bool degenerate = false;  // H vanished
  bool shifted = false;     // K~ needed a diagonal shift (floating structure)
};

// alpha = lambda_max(K~^-1 H) / 2 by block power iteration on the free DOFs
// (both matrices already restricted, full symmetric storage).
AlphaEstimate estimate_alpha(const SparseMatrix& Ktilde, const SparseMatrix& H, double rel_tol = 1e-8,
                             int max_iterations = 5000);

}  // namespace mixdim::coupling
