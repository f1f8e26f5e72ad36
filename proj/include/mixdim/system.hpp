#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mixdim/coupling.hpp"
#include "mixdim/elasticity.hpp"
#include "mixdim/linear_solver.hpp"
#include "mixdim/mesh.hpp"
#include "mixdim/nonconforming.hpp"
#include "mixdim/structural.hpp"

namespace mixdim::system {

using elasticity::Material;
using structural::Theory;

struct SolidPart {
  mesh::Mesh mesh;
  Material material;
};

struct Overlap {
  nonconforming::OverlapRegion region;
  int n_cut = 10;
  double tau = 0.01;
};

struct StructurePart {
  mesh::Mesh mesh;
  Theory theory = Theory::Timoshenko;
  Material material;
  std::optional<Overlap> overlap;  // set for non-conforming coupling
};

struct CouplingSpec {
  int structure = 0;  // index into Model::structures
  std::vector<coupling::PlaneLocator> locators;
  std::optional<double> alpha;  // empty: estimate
  int points = 0;               // per facet direction, 0 = default
};

// Which nodes/control points of a part a boundary condition or load acts on.
struct Selection {
  enum class Kind { Side, Plane, All } kind = Kind::Side;
  int direction = 0;  // Side: parametric direction
  int side = 0;       // 0 = lower end, 1 = upper end
  int rows = 1;       // Side: number of layers (2 for the rotation-free clamp)
  Eigen::VectorXd point, normal;  // Plane (global coordinates of the part's mesh)
  double tol = 1e-9;
};

// value(x) returns one entry per nodal DOF of the part (x in the part's
// geometry coordinates); empty function means homogeneous data.
using Field = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct DirichletBC {
  int part = 0;  // 0 = solid, k >= 1 = structures[k - 1]
  Selection where;
  std::vector<int> components;
  Field value;
};

struct PointLoad {
  int part = 0;
  Eigen::VectorXd x;      // geometry coordinates of the part
  Eigen::VectorXd force;  // one entry per nodal DOF
};

struct TractionLoad {  // solids: traction on the boundary facets of one side
  int direction = 0;
  int side = 0;
  Field traction;
};

struct BodyLoad {  // solids: constant force per unit volume
  Eigen::VectorXd b;
};

struct DistributedLoad {  // structures: transverse load per length / area
  int part = 1;
  double q = 0.0;
};

struct EdgeLoad {  // plates: transverse line load on one side
  int part = 1;
  int direction = 0;
  int side = 0;
  double q = 0.0;
};

struct Model {
  SolidPart solid;
  std::vector<StructurePart> structures;
  std::vector<CouplingSpec> couplings;
  std::vector<DirichletBC> dirichlet;
  std::vector<PointLoad> point_loads;
  std::vector<TractionLoad> tractions;
  std::vector<BodyLoad> body_loads;
  std::vector<DistributedLoad> distributed_loads;
  std::vector<EdgeLoad> edge_loads;
  bool has_solid = true;
};

struct Solution {
  Eigen::VectorXd a;          // all DOFs
  Eigen::VectorXd reactions;  // K a - f on constrained DOFs, zero elsewhere
  std::vector<double> alphas;
  double residual = 0.0;      // ||K_ff a_f - rhs|| / ||rhs||
};

struct Sample {
  Eigen::VectorXd u;      // global displacement
  Eigen::VectorXd sigma;  // Voigt stress: 3 comps in 2D, 6 in 3D
};

// Assembled mixed-dimensional problem.
class System {
 public:
  explicit System(Model model);

  const Model& model() const { return model_; }
  int num_parts() const { return static_cast<int>(offsets_.size()); }
  int num_dofs() const { return ndof_; }
  int offset(int part) const { return offsets_[static_cast<size_t>(part)]; }
  int dofs_per_node(int part) const;
  const mesh::Mesh& part_mesh(int part) const;
  int dof(int part, int node, int component) const { return offset(part) + dofs_per_node(part) * node + component; }

  const SparseMatrix& bulk() const { return bulk_; }  // K^s + K^b, unconstrained
  const Eigen::VectorXd& load() const { return load_; }
  const std::vector<char>& constrained() const { return constrained_; }
  const Eigen::VectorXd& constrained_values() const { return values_; }
  const std::vector<coupling::Interface>& interfaces() const { return interfaces_; }
  const std::vector<nonconforming::Label>& labels(int structure) const { return labels_[static_cast<size_t>(structure)]; }
  const std::vector<bool>& inactive(int structure) const { return inactive_[static_cast<size_t>(structure)]; }
  int num_inactive() const;  // deactivated structural basis functions (nodes), all structures

  SparseMatrix nitsche(int c) const;        // K^n + (K^n)^T of coupling c
  SparseMatrix stabilization(int c) const;  // K^st of coupling c (alpha = 1)
  SparseMatrix flux(int c) const;           // H of coupling c

  // Stabilization per coupling: fixed values, estimated where requested.
  std::vector<double> alphas() const;
  coupling::AlphaEstimate estimate(int c) const;

  SparseMatrix matrix(const std::vector<double>& alphas) const;
  // Restriction to the free DOFs.
  SparseMatrix reduce(const SparseMatrix& A) const;
  const std::vector<int>& free_dofs() const { return free_; }

  bool positive_definite(const std::vector<double>& alphas) const;
  Solution solve(const std::vector<double>& alphas) const;
  Solution solve() const { return solve(alphas()); }

  // Point sample in part `part`; x in global coordinates.
  Sample recover(const Solution& s, int part, const Eigen::VectorXd& x) const;

  // Jump energy a^T K^st a summed over couplings.
  double jump_energy(const Solution& s) const;

 private:
  void build_dofs();
  void build_bulk();
  void build_interfaces();
  void build_constraints();
  void build_loads();
  void fix(int dof, double value);
  std::vector<std::pair<int, double>> dirichlet_values(const DirichletBC& bc) const;

  Model model_;
  std::vector<int> offsets_;
  int ndof_ = 0;
  SparseMatrix bulk_;
  Eigen::VectorXd load_;
  std::vector<char> constrained_;
  Eigen::VectorXd values_;
  std::vector<int> free_;
  std::vector<int> free_index_;  // dof -> position among free DOFs or -1
  std::vector<coupling::Interface> interfaces_;
  std::vector<coupling::Context> contexts_;
  std::vector<std::vector<nonconforming::Label>> labels_;
  std::vector<std::vector<bool>> inactive_;
  std::vector<std::vector<double>> outside_;
};

// Convenience wrapper: stabilization estimate of the first coupling of a model.
coupling::AlphaEstimate estimate_stabilization(const Model& model);

}  // namespace mixdim::system
