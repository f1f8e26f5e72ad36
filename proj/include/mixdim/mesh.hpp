#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mixdim/basis.hpp"

namespace mixdim::mesh {

enum class ModelKind { Solid2D, Solid3D, Beam, Plate };
enum class BasisKind { Lagrange, Spline };

int parametric_dim(ModelKind kind);
std::string to_string(ModelKind kind);
std::string to_string(BasisKind kind);

// Placement of a reduced model in global space. Beams live on the line
// origin + xbar * (cos angle, sin angle); plates on the plane z = mid_surface.
struct Placement {
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  double angle = 0.0;
  double mid_surface = 0.0;
};

// Shape functions of one element at one point. Derivatives are taken with
// respect to the mesh geometry coordinates; second derivatives are stored
// as columns (xx) in 1D, (xx, yy, xy) in 2D, (xx, yy, zz, xy, yz, xz) in 3D.
struct ShapeValues {
  int element = -1;
  Eigen::VectorXd N;
  Eigen::MatrixXd dN;
  Eigen::MatrixXd d2N;
  Eigen::VectorXd x;
  Eigen::MatrixXd J;  // d x / d parent
  double detJ = 0.0;
};

// Element face with parent coordinate `direction` fixed at -1 (side 0) or +1 (side 1).
struct Facet {
  int element = -1;
  int direction = 0;
  int side = 0;
  bool operator==(const Facet&) const = default;
};

struct InverseMapResult {
  Eigen::VectorXd parent;
  bool inside = false;
  int iterations = 0;
};

struct Located {
  int element = -1;
  Eigen::VectorXd parent;
};

class Mesh {
 public:
  Mesh() = default;

  // Tensor-product mesh over the box [lower, lower + extent]. `degrees` and
  // `spans` may hold one entry (used for every direction) or one per direction.
  static Mesh build(ModelKind kind, BasisKind basis, std::vector<int> degrees, std::vector<int> spans,
                    std::vector<double> lower, std::vector<double> extent);

  // Spline patch from explicit knot vectors and control points (lexicographic, first index fastest).
  static Mesh spline_patch(ModelKind kind, std::vector<basis::KnotVector> knots, Eigen::MatrixXd control_points);

  // Unstructured bilinear/linear Lagrange mesh (local node order is tensor order, first index fastest).
  static Mesh lagrange(ModelKind kind, Eigen::MatrixXd nodes, Eigen::MatrixXi ien);

  // Union of two Lagrange meshes of the same kind; coincident nodes are merged.
  static Mesh merge(const Mesh& a, const Mesh& b, double tol = 1e-9);

  ModelKind model() const { return model_; }
  BasisKind basis() const { return basis_; }
  int dim() const { return dim_; }
  int num_elements() const { return static_cast<int>(ien_.rows()); }
  int num_nodes() const { return static_cast<int>(nodes_.rows()); }
  int nodes_per_element() const { return static_cast<int>(ien_.cols()); }
  int degree(int direction) const { return degrees_[static_cast<size_t>(direction)]; }
  int min_degree() const;
  const std::vector<int>& degrees() const { return degrees_; }
  const Eigen::MatrixXd& nodes() const { return nodes_; }
  const Eigen::MatrixXi& ien() const { return ien_; }
  const std::vector<basis::KnotVector>& knots() const { return knots_; }
  bool structured() const { return !grid_elements_.empty(); }

  // Elements and nodes per direction of a structured mesh.
  const std::vector<int>& grid_elements() const { return grid_elements_; }
  const std::vector<int>& grid_nodes() const { return grid_nodes_; }
  std::array<int, 3> element_grid_index(int e) const;
  std::array<int, 3> node_grid_index(int node) const;

  // Parameter interval of a spline element along one direction.
  std::pair<double, double> element_param_range(int e, int direction) const;

  ShapeValues shape(int e, const Eigen::VectorXd& parent, int deriv_order = 1) const;
  Eigen::VectorXd map_to_physical(int e, const Eigen::VectorXd& parent) const;
  Eigen::MatrixXd jacobian(int e, const Eigen::VectorXd& parent, double* det = nullptr) const;
  InverseMapResult inverse_map(int e, const Eigen::VectorXd& x) const;

  // First element whose closure contains x (geometry coordinates).
  std::optional<Located> locate(const Eigen::VectorXd& x, double tol = 1e-8) const;

  // Spline patch parameter point to geometry coordinates.
  Eigen::VectorXd param_to_physical(const Eigen::VectorXd& param) const;

  std::vector<Facet> boundary_facets() const;
  bool is_boundary_facet(const Facet& f) const;

  // Outward unit normal and measure density of a facet at a face-local point
  // (the parent coordinates of the element with f.direction already fixed).
  void facet_geometry(const Facet& f, const Eigen::VectorXd& parent, Eigen::VectorXd& normal,
                      double& measure_density) const;

  // Nodes in the first `rows` layers next to a side of a structured mesh.
  std::vector<int> side_nodes(int direction, int side, int rows = 1) const;

  // Nodes with |(x - point) . normal| <= tol (works on unstructured meshes too).
  std::vector<int> nodes_on_plane(const Eigen::VectorXd& point, const Eigen::VectorXd& normal,
                                  double tol = 1e-9) const;

  std::pair<Eigen::VectorXd, Eigen::VectorXd> element_bbox(int e) const;
  double element_diameter(int e) const;
  double element_measure(int e) const;

  // Apply x <- Q x + t to every node (solids only).
  void transform(const Eigen::MatrixXd& Q, const Eigen::VectorXd& t);

  // Geometry coordinates to global coordinates (identity for solids).
  Eigen::VectorXd to_global(const Eigen::VectorXd& x) const;

  Placement placement;

 private:
  ModelKind model_ = ModelKind::Solid2D;
  BasisKind basis_ = BasisKind::Lagrange;
  int dim_ = 0;
  std::vector<int> degrees_;
  std::vector<basis::KnotVector> knots_;
  Eigen::MatrixXd nodes_;
  Eigen::MatrixXi ien_;
  std::vector<int> grid_elements_;
  std::vector<int> grid_nodes_;
  // spline: span index (into knots_[k].spans()) per element and direction
  std::vector<std::array<int, 3>> elem_spans_;
};

}  // namespace mixdim::mesh
