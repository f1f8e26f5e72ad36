#include "mixdim/elasticity.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "mixdim/errors.hpp"
#include "mixdim/quadrature.hpp"

namespace mixdim::elasticity {

using mesh::Mesh;
using mesh::ShapeValues;

void Material::validate() const {
  if (!(E > 0.0)) throw Error(ErrorKind::Config, "Young's modulus must be positive");
  if (!(nu > -1.0 && nu < 0.5)) throw Error(ErrorKind::Config, "Poisson ratio must lie in (-1, 0.5)");
  if (!(k_shear > 0.0)) throw Error(ErrorKind::Config, "shear correction factor must be positive");
  if (!(thickness > 0.0) || !(width > 0.0)) throw Error(ErrorKind::Config, "section sizes must be positive");
}

int voigt_size(int dim) { return dim == 2 ? 3 : 6; }

Eigen::MatrixXd constitutive_solid(const Material& m, int dim) {
  const double E = m.E, nu = m.nu;
  if (dim == 2) {
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(3, 3);
    const double f = E / (1.0 - nu * nu);
    C << f, f * nu, 0, f * nu, f, 0, 0, 0, f * (1.0 - nu) / 2.0;
    return C;
  }
  if (dim != 3) throw Error(ErrorKind::Config, "solid dimension must be 2 or 3");
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(6, 6);
  const double lam = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  const double mu = E / (2.0 * (1.0 + nu));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) C(i, j) = lam;
    C(i, i) = lam + 2.0 * mu;
    C(i + 3, i + 3) = mu;
  }
  return C;
}

int integrate(const Mesh& mesh, int e, const QuadratureSpec& q, int deriv_order,
              const std::function<void(const ShapeValues&, double)>& f) {
  const int d = mesh.dim();
  std::array<int, 3> n{1, 1, 1};
  for (int k = 0; k < d; ++k) n[k] = q.points > 0 ? q.points : mesh.degree(k) + 1;
  const auto rule = quad::tensor_rule(d, n);
  Eigen::VectorXd p(d);
  int used = 0;
  for (size_t i = 0; i < rule.w.size(); ++i) {
    for (int k = 0; k < d; ++k) p[k] = rule.x[i][k];
    if (q.skip) {
      if (q.skip(mesh.map_to_physical(e, p))) continue;
    }
    const auto sv = mesh.shape(e, p, deriv_order);
    f(sv, rule.w[i] * sv.detJ);
    ++used;
  }
  return used;
}

void integrate_facet(const Mesh& mesh, const mesh::Facet& facet, int points, int deriv_order,
                     const std::function<void(const ShapeValues&, const Eigen::VectorXd&, double)>& f) {
  const int d = mesh.dim();
  const auto rule = quad::tensor_rule(std::max(d - 1, 1), points);
  Eigen::VectorXd p(d), normal;
  for (size_t i = 0; i < rule.w.size(); ++i) {
    int c = 0;
    for (int k = 0; k < d; ++k) {
      if (k == facet.direction) {
        p[k] = facet.side == 0 ? -1.0 : 1.0;
      } else {
        p[k] = rule.x[i][c++];
      }
    }
    double dA = 0.0;
    mesh.facet_geometry(facet, p, normal, dA);
    const double w = d == 1 ? 1.0 : rule.w[i];
    f(mesh.shape(facet.element, p, deriv_order), normal, w * dA);
    if (d == 1) break;
  }
}

Eigen::MatrixXd displacement_matrix(const ShapeValues& sv, int dim) {
  const int nen = static_cast<int>(sv.N.size());
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(dim, dim * nen);
  for (int a = 0; a < nen; ++a)
    for (int i = 0; i < dim; ++i) N(i, dim * a + i) = sv.N[a];
  return N;
}

Eigen::MatrixXd strain_displacement(const ShapeValues& sv, int dim) {
  const int nen = static_cast<int>(sv.N.size());
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(voigt_size(dim), dim * nen);
  for (int a = 0; a < nen; ++a) {
    const double nx = sv.dN(a, 0), ny = sv.dN(a, 1);
    if (dim == 2) {
      B(0, 2 * a) = nx;
      B(1, 2 * a + 1) = ny;
      B(2, 2 * a) = ny;
      B(2, 2 * a + 1) = nx;
    } else {
      const double nz = sv.dN(a, 2);
      const int c = 3 * a;
      B(0, c) = nx;
      B(1, c + 1) = ny;
      B(2, c + 2) = nz;
      B(3, c) = ny;
      B(3, c + 1) = nx;
      B(4, c + 1) = nz;
      B(4, c + 2) = ny;
      B(5, c) = nz;
      B(5, c + 2) = nx;
    }
  }
  return B;
}

Eigen::MatrixXd strain_displacement_solid(const Mesh& mesh, int e, const Eigen::VectorXd& parent) {
  return strain_displacement(mesh.shape(e, parent, 1), mesh.dim());
}

namespace {

void require_solid(const Mesh& mesh) {
  if (mesh.model() != mesh::ModelKind::Solid2D && mesh.model() != mesh::ModelKind::Solid3D) {
    throw Error(ErrorKind::Config, "continuum kernel called on a " + mesh::to_string(mesh.model()) + " mesh");
  }
}

double out_of_plane(const Mesh& mesh, const Material& m) { return mesh.dim() == 2 ? m.thickness : 1.0; }

}  // namespace

Eigen::MatrixXd stiffness_solid(const Mesh& mesh, int e, const Material& m, const QuadratureSpec& q) {
  require_solid(mesh);
  const int d = mesh.dim();
  const Eigen::MatrixXd C = constitutive_solid(m, d) * out_of_plane(mesh, m);
  const int n = d * mesh.nodes_per_element();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  integrate(mesh, e, q, 1, [&](const ShapeValues& sv, double w) {
    const Eigen::MatrixXd B = strain_displacement(sv, d);
    K.noalias() += w * (B.transpose() * C * B);
  });
  return 0.5 * (K + K.transpose());
}

Eigen::VectorXd body_force(const Mesh& mesh, int e, const Eigen::VectorXd& b, const Material& m,
                           const QuadratureSpec& q) {
  require_solid(mesh);
  const int d = mesh.dim();
  if (b.size() != d) throw Error(ErrorKind::Config, "body force has the wrong dimension");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(d * mesh.nodes_per_element());
  const double t = out_of_plane(mesh, m);
  integrate(mesh, e, q, 0, [&](const ShapeValues& sv, double w) {
    for (int a = 0; a < sv.N.size(); ++a) f.segment(d * a, d) += (w * t * sv.N[a]) * b;
  });
  return f;
}

Eigen::VectorXd traction_force(const Mesh& mesh, const std::vector<mesh::Facet>& facets,
                               const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& traction,
                               const Material& m) {
  require_solid(mesh);
  const int d = mesh.dim();
  std::set<std::tuple<int, int, int>> boundary;
  for (const auto& f : mesh.boundary_facets()) boundary.insert({f.element, f.direction, f.side});
  Eigen::VectorXd F = Eigen::VectorXd::Zero(d * mesh.num_nodes());
  const double t = out_of_plane(mesh, m);
  int pmax = 1;
  for (int k = 0; k < d; ++k) pmax = std::max(pmax, mesh.degree(k));
  for (const auto& f : facets) {
    if (!boundary.count({f.element, f.direction, f.side})) {
      throw Error(ErrorKind::Config, "traction facet is not on the mesh boundary");
    }
    integrate_facet(mesh, f, pmax + 3, 0, [&](const ShapeValues& sv, const Eigen::VectorXd&, double w) {
      const Eigen::VectorXd tv = traction(sv.x);
      for (int a = 0; a < sv.N.size(); ++a) {
        F.segment(d * mesh.ien()(f.element, a), d) += (w * t * sv.N[a]) * tv;
      }
    });
  }
  return F;
}

}  // namespace mixdim::elasticity
