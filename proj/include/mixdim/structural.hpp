#pragma once

#include <Eigen/Dense>
#include <string>

#include "mixdim/elasticity.hpp"
#include "mixdim/mesh.hpp"

namespace mixdim::structural {

using elasticity::Material;
using elasticity::QuadratureSpec;

enum class Theory { EulerBernoulli, Timoshenko, Kirchhoff, Mindlin };

std::string to_string(Theory t);
Theory theory_from_string(const std::string& s);  // throws Config
bool is_beam(Theory t);
// EB: w. Timoshenko: (u, w, theta) in global axes (u_x, u_y, theta). Kirchhoff: w. Mindlin: (w, beta1, beta2).
int dofs_per_node(Theory t);

// Throws Model if the mesh cannot carry the theory (kind mismatch, C0 basis for rotation-free bending).
void check_compatible(const mesh::Mesh& mesh, Theory t);

// Plate constitutive blocks.
Eigen::Matrix3d plate_bending_matrix(const Material& m);  // D_b = E h^3 / (12 (1 - nu^2)) [...]
Eigen::Matrix2d plate_shear_matrix(const Material& m);    // D_s = k G h I

Eigen::MatrixXd stiffness_beam_eb(const mesh::Mesh& mesh, int e, const Material& m, const QuadratureSpec& q = {});
// Global-axis stiffness (rotated by the mesh placement angle).
Eigen::MatrixXd stiffness_beam_timoshenko(const mesh::Mesh& mesh, int e, const Material& m,
                                          const QuadratureSpec& q = {});
Eigen::MatrixXd stiffness_plate(const mesh::Mesh& mesh, int e, Theory t, const Material& m,
                                const QuadratureSpec& q = {});
Eigen::MatrixXd stiffness(const mesh::Mesh& mesh, int e, Theory t, const Material& m, const QuadratureSpec& q = {});

// Nodal loads (element vectors in the element's DOF layout).
// Uniform transverse load per unit length (beams, along the local y axis) or per unit area (plates, along +z).
Eigen::VectorXd distributed_load(const mesh::Mesh& mesh, int e, Theory t, double q, const QuadratureSpec& qs = {});

// Reduced-model kinematics expanded to continuum fields at a cross-section point.
// Beams: N is 2 x ndof in the local (xbar, ybar) frame, B gives (e_xx, e_yy, 2e_xy), C is 3x3.
// Plates: N is 3 x ndof, B gives 3 (Kirchhoff: xx, yy, xy) or 5 (Mindlin: xx, yy, xy, yz, xz) strains.
struct Prolongation {
  Eigen::MatrixXd N, B, C;
};
Prolongation prolong_beam(Theory t, const Material& m, const mesh::ShapeValues& sv, double ybar);
Prolongation prolong_plate(Theory t, const Material& m, const mesh::ShapeValues& sv, double x3);

struct FrameTransforms {
  Eigen::Matrix2d Rv;    // v_local = Rv v_global
  Eigen::Matrix3d Tinv;  // sigma_global = Tinv sigma_local (Voigt xx, yy, xy)
  Eigen::Matrix3d R;     // (u, w, theta)_local = R (u_x, u_y, theta)_global
};
FrameTransforms frame_transforms(double phi);

}  // namespace mixdim::structural
