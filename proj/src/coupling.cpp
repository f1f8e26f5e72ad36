#include "mixdim/coupling.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <sstream>

#include "mixdim/errors.hpp"
#include "mixdim/quadrature.hpp"

namespace mixdim::coupling {

using mesh::Mesh;
using structural::Theory;

double Interface::measure() const {
  double s = 0.0;
  for (const auto& p : points) s += p.weight;
  return s;
}

Eigen::VectorXd structure_coordinates(const Mesh& structure, const Eigen::VectorXd& x, double* offset) {
  if (structure.model() == mesh::ModelKind::Beam) {
    if (x.size() != 2) throw Error(ErrorKind::Config, "beams couple to 2D solids only");
    const double c = std::cos(structure.placement.angle), s = std::sin(structure.placement.angle);
    const Eigen::Vector2d r = x - structure.placement.origin;
    if (offset) *offset = -s * r[0] + c * r[1];
    Eigen::VectorXd g(1);
    g[0] = c * r[0] + s * r[1];
    return g;
  }
  if (structure.model() == mesh::ModelKind::Plate) {
    if (x.size() != 3) throw Error(ErrorKind::Config, "plates couple to 3D solids only");
    if (offset) *offset = x[2] - structure.placement.mid_surface;
    return x.head(2);
  }
  throw Error(ErrorKind::Config, "structure mesh must be a beam or a plate");
}

namespace {

int max_degree(const Mesh& m) {
  int p = 0;
  for (int k = 0; k < m.dim(); ++k) p = std::max(p, m.degree(k));
  return p;
}

bool needs_second_derivatives(Theory t) { return t == Theory::EulerBernoulli || t == Theory::Kirchhoff; }

}  // namespace

Interface build_interface(const Mesh& solid, const Mesh& structure, const std::vector<PlaneLocator>& locators,
                          int points_per_dir) {
  if (solid.model() != mesh::ModelKind::Solid2D && solid.model() != mesh::ModelKind::Solid3D) {
    throw Error(ErrorKind::Config, "interface owner must be a solid mesh");
  }
  const int d = solid.dim();
  for (const auto& L : locators) {
    if (L.point.size() != d || L.normal.size() != d) throw Error(ErrorKind::Config, "locator dimension mismatch");
    if (std::abs(L.normal.norm() - 1.0) > 1e-10) throw Error(ErrorKind::Normalization, "locator normal not unit");
  }
  const int n = points_per_dir > 0 ? points_per_dir : max_degree(solid) + max_degree(structure) + 1;
  const auto rule = quad::tensor_rule(d - 1, n);
  Interface iface;
  Eigen::VectorXd p(d), normal;
  for (const auto& f : solid.boundary_facets()) {
    for (int k = 0; k < d; ++k) p[k] = k == f.direction ? (f.side == 0 ? -1.0 : 1.0) : 0.0;
    double dA = 0.0;
    solid.facet_geometry(f, p, normal, dA);
    const Eigen::VectorXd xc = solid.map_to_physical(f.element, p);
    const double diam = solid.element_diameter(f.element);
    bool on = false;
    for (const auto& L : locators) {
      if (normal.dot(L.normal) > 1.0 - 1e-8 && std::abs((xc - L.point).dot(L.normal)) <= L.tol * diam) on = true;
    }
    if (!on) continue;
    iface.facets.push_back(f);
    for (size_t q = 0; q < rule.w.size(); ++q) {
      int c = 0;
      for (int k = 0; k < d; ++k) {
        if (k != f.direction) p[k] = rule.x[q][c++];
      }
      InterfacePoint ip;
      ip.solid_element = f.element;
      ip.solid_parent = p;
      solid.facet_geometry(f, p, ip.normal, dA);
      ip.weight = rule.w[q] * dA;
      ip.x = solid.map_to_physical(f.element, p);
      const Eigen::VectorXd g = structure_coordinates(structure, ip.x, &ip.offset);
      auto loc = structure.locate(g);
      if (!loc) {
        std::ostringstream os;
        os << "no structural element contains interface point (" << ip.x.transpose() << ")";
        throw Error(ErrorKind::Pairing, os.str());
      }
      ip.struct_element = loc->element;
      ip.struct_parent = loc->parent;
      iface.points.push_back(std::move(ip));
    }
  }
  return iface;
}

Eigen::MatrixXd normal_matrix(const Eigen::VectorXd& n, int dim, Reduction r) {
  if (n.size() != dim) throw Error(ErrorKind::Config, "normal has the wrong dimension");
  if (std::abs(n.norm() - 1.0) > 1e-10) throw Error(ErrorKind::Normalization, "normal is not a unit vector");
  if (dim == 2) {
    Eigen::MatrixXd M(2, 3);
    M << n[0], 0, n[1], 0, n[1], n[0];
    return M;
  }
  const double nx = n[0], ny = n[1], nz = n[2];
  switch (r) {
    case Reduction::None: {
      Eigen::MatrixXd M(3, 6);
      M << nx, 0, 0, ny, 0, nz, 0, ny, 0, nx, nz, 0, 0, 0, nz, 0, ny, nx;
      return M;
    }
    case Reduction::Kirchhoff: {
      Eigen::MatrixXd M(3, 3);
      M << nx, 0, ny, 0, ny, nx, 0, 0, 0;
      return M;
    }
    case Reduction::Mindlin: {
      Eigen::MatrixXd M(3, 5);
      M << nx, 0, ny, 0, nz, 0, ny, nx, nz, 0, 0, 0, 0, ny, nx;
      return M;
    }
  }
  return {};
}

PointOperators point_operators(const Context& ctx, const InterfacePoint& ip) {
  const Mesh& solid = *ctx.solid;
  const Mesh& st = *ctx.structure;
  const int d = solid.dim();
  PointOperators op;

  const auto svs = solid.shape(ip.solid_element, ip.solid_parent, 1);
  op.Us = elasticity::displacement_matrix(svs, d);
  const Eigen::MatrixXd S = elasticity::constitutive_solid(ctx.solid_material, d) * elasticity::strain_displacement(svs, d);
  for (int a = 0; a < solid.nodes_per_element(); ++a)
    for (int i = 0; i < d; ++i) op.solid_dofs.push_back(ctx.solid_offset + d * solid.ien()(ip.solid_element, a) + i);

  const Theory t = ctx.theory;
  const int ndof = structural::dofs_per_node(t);
  for (int a = 0; a < st.nodes_per_element(); ++a)
    for (int i = 0; i < ndof; ++i) op.struct_dofs.push_back(ctx.struct_offset + ndof * st.ien()(ip.struct_element, a) + i);

  auto so = structure_operators(st, t, ctx.struct_material, ip.struct_element, ip.struct_parent, ip.offset);
  op.Ub = std::move(so.U);
  op.Sb = std::move(so.S);
  if (structural::is_beam(t)) {
    op.Ss = S;
    op.Nm = normal_matrix(ip.normal, 2);
  } else if (t == Theory::Kirchhoff) {
    op.Ss.resize(3, S.cols());
    op.Ss << S.row(0), S.row(1), S.row(3);
    op.Nm = normal_matrix(ip.normal, 3, Reduction::Kirchhoff);
  } else {
    op.Ss.resize(5, S.cols());
    op.Ss << S.row(0), S.row(1), S.row(3), S.row(4), S.row(5);
    op.Nm = normal_matrix(ip.normal, 3, Reduction::Mindlin);
  }
  return op;
}

StructureOperators structure_operators(const Mesh& st, Theory t, const elasticity::Material& m, int e,
                                       const Eigen::VectorXd& parent, double offset) {
  const auto svb = st.shape(e, parent, needs_second_derivatives(t) ? 2 : 1);
  StructureOperators so;
  if (structural::is_beam(t)) {
    const auto pr = structural::prolong_beam(t, m, svb, offset);
    const auto ft = structural::frame_transforms(st.placement.angle);
    Eigen::MatrixXd N = pr.N, SB = pr.C * pr.B;
    if (t == Theory::Timoshenko) {
      Eigen::MatrixXd Rb = Eigen::MatrixXd::Zero(N.cols(), N.cols());
      for (int a = 0; a < st.nodes_per_element(); ++a) Rb.block<3, 3>(3 * a, 3 * a) = ft.R;
      N = N * Rb;
      SB = SB * Rb;
    }
    so.U = ft.Rv.transpose() * N;
    so.S = ft.Tinv * SB;
    return so;
  }
  const auto pr = structural::prolong_plate(t, m, svb, offset);
  so.U = pr.N;
  so.S = pr.C * pr.B;
  return so;
}

namespace {

void scatter(Triplets& out, const Eigen::MatrixXd& M, const std::vector<int>& dofs) {
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0.0) out.emplace_back(dofs[i], dofs[j], M(i, j));
}

double out_of_plane(const Context& ctx) {
  return ctx.solid->dim() == 2 ? ctx.solid_material.thickness : 1.0;
}

}  // namespace

CouplingTerms assemble_coupling(const Context& ctx, const Interface& iface, double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::Config, "stabilization parameter must be positive");
  CouplingTerms out;
  const double t = out_of_plane(ctx);
  for (const auto& ip : iface.points) {
    const auto op = point_operators(ctx, ip);
    const int ns = static_cast<int>(op.Us.cols()), nb = static_cast<int>(op.Ub.cols());
    Eigen::MatrixXd jump(op.Us.rows(), ns + nb), avg(op.Nm.rows(), ns + nb);
    jump << op.Us, -op.Ub;
    avg << 0.5 * op.Nm * op.Ss, 0.5 * op.Nm * op.Sb;
    const double w = ip.weight * t;
    const Eigen::MatrixXd Kn = -w * jump.transpose() * avg;
    std::vector<int> dofs = op.solid_dofs;
    dofs.insert(dofs.end(), op.struct_dofs.begin(), op.struct_dofs.end());
    scatter(out.nitsche, Kn + Kn.transpose(), dofs);
    scatter(out.stabilization, w * jump.transpose() * jump, dofs);
  }
  return out;
}

Triplets assemble_flux(const Context& ctx, const Interface& iface) {
  Triplets out;
  const double t = out_of_plane(ctx);
  for (const auto& ip : iface.points) {
    const auto op = point_operators(ctx, ip);
    Eigen::MatrixXd T(op.Nm.rows(), op.Ss.cols() + op.Sb.cols());
    T << op.Nm * op.Ss, op.Nm * op.Sb;
    std::vector<int> dofs = op.solid_dofs;
    dofs.insert(dofs.end(), op.struct_dofs.begin(), op.struct_dofs.end());
    scatter(out, (ip.weight * t) * T.transpose() * T, dofs);
  }
  return out;
}

AlphaEstimate estimate_alpha(const SparseMatrix& Ktilde, const SparseMatrix& H, double rel_tol,
                             int max_iterations) {
  const int n = static_cast<int>(Ktilde.rows());
  if (Ktilde.cols() != n || H.rows() != n || H.cols() != n) {
    throw Error(ErrorKind::Internal, "stabilization matrices have inconsistent sizes");
  }
  AlphaEstimate est;
  if (n == 0 || H.norm() == 0.0) {
    est.degenerate = true;
    return est;
  }
  SparseCholesky chol;
  double delta = 0.0;
  if (!chol.factor(Ktilde)) {
    // Floating structures leave rigid modes in K~; H annihilates them, so a
    // tiny shift leaves the nonzero spectrum of K~^-1 H untouched.
    double dmax = 0.0;
    for (int i = 0; i < n; ++i) dmax = std::max(dmax, std::abs(Ktilde.coeff(i, i)));
    delta = 1e-10 * dmax;
    SparseMatrix I(n, n);
    I.setIdentity();
    SparseMatrix Ks = Ktilde + delta * I;
    if (!chol.factor(Ks)) throw Error(ErrorKind::Constraint, "bulk stiffness is not positive semi-definite");
    est.shifted = true;
  }

  // Block power iteration with Rayleigh-Ritz: the largest eigenvalues of
  // interface problems come in near-degenerate pairs, which stalls a single
  // vector. Width 8 keeps the rate at lambda_9 / lambda_1.
  const int k = std::min(8, n);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::MatrixXd V(n, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) V(i, j) = U(rng);
  double lambda = 0.0;
  Eigen::VectorXd v;
  for (int it = 1; it <= max_iterations; ++it) {
    const Eigen::MatrixXd W = chol.solve(Eigen::MatrixXd(H * V));
    // K~-orthonormal basis of span(W), dropping directions without energy
    const Eigen::MatrixXd KW = Ktilde * W;
    Eigen::MatrixXd B = W.transpose() * KW;
    if (delta > 0.0) B += delta * (W.transpose() * W);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(0.5 * (B + B.transpose()));
    const double bmax = eb.eigenvalues().maxCoeff();
    if (!(bmax > 0.0)) {
      est.degenerate = true;
      return est;
    }
    std::vector<int> keep;
    for (int j = 0; j < k; ++j)
      if (eb.eigenvalues()[j] > 1e-12 * bmax) keep.push_back(j);
    Eigen::MatrixXd Q(n, static_cast<int>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) {
      Q.col(static_cast<int>(j)) = W * eb.eigenvectors().col(keep[j]) / std::sqrt(eb.eigenvalues()[keep[j]]);
    }
    const Eigen::MatrixXd A = Q.transpose() * (H * Q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(0.5 * (A + A.transpose()));
    const int top = static_cast<int>(A.rows()) - 1;
    const double next = ea.eigenvalues()[top];
    v = Q * ea.eigenvectors().col(top);
    est.iterations = it;
    const bool done = it > 1 && std::abs(next - lambda) <= rel_tol * std::abs(next);
    lambda = next;
    if (done) break;
    if (it == max_iterations) {
      throw Error(ErrorKind::NoConvergence, "stabilization eigenvalue iteration did not converge");
    }
    // restart from the Ritz vectors, padded with fresh directions if the basis shrank
    V = Q * ea.eigenvectors();
    if (V.cols() < k) {
      Eigen::MatrixXd P(n, k);
      P.leftCols(V.cols()) = V;
      for (int j = static_cast<int>(V.cols()); j < k; ++j)
        for (int i = 0; i < n; ++i) P(i, j) = U(rng);
      V = P;
    }
  }
  if (lambda < 0.0) throw Error(ErrorKind::Constraint, "interface flux matrix is not positive semi-definite");
  if (est.shifted && v.dot(Ktilde * v) < 1e3 * delta * v.squaredNorm()) {
    throw Error(ErrorKind::Constraint, "interface flux couples to an unconstrained rigid mode");
  }
  est.lambda1 = lambda;
  est.alpha = 0.5 * lambda;
  est.degenerate = lambda == 0.0;
  return est;
}

}  // namespace mixdim::coupling
