#include "mixdim/system.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mixdim/basis.hpp"
#include "mixdim/errors.hpp"

namespace mixdim::system {

using mesh::Mesh;
using nonconforming::Label;

namespace {

// Triplet buffer flushed into a sparse matrix every few million entries so
// large 3D assemblies do not hold all element contributions at once.
class Accumulator {
 public:
  explicit Accumulator(int n) : K_(n, n) {}
  void add(int i, int j, double v) {
    buf_.emplace_back(i, j, v);
    if (buf_.size() >= kChunk) flush();
  }
  void add(const Eigen::MatrixXd& M, const std::vector<int>& dofs) {
    for (int j = 0; j < M.cols(); ++j)
      for (int i = 0; i < M.rows(); ++i)
        if (M(i, j) != 0.0) add(dofs[i], dofs[j], M(i, j));
  }
  SparseMatrix finish() {
    flush();
    K_.makeCompressed();
    return std::move(K_);
  }

 private:
  static constexpr size_t kChunk = 4'000'000;
  void flush() {
    if (buf_.empty()) return;
    SparseMatrix part(K_.rows(), K_.cols());
    part.setFromTriplets(buf_.begin(), buf_.end());
    K_ += part;
    buf_.clear();
  }
  SparseMatrix K_;
  std::vector<Eigen::Triplet<double>> buf_;
};

SparseMatrix from_triplets(int n, const coupling::Triplets& t) {
  SparseMatrix M(n, n);
  M.setFromTriplets(t.begin(), t.end());
  return M;
}

}  // namespace

System::System(Model model) : model_(std::move(model)) {
  if (model_.has_solid) {
    const auto k = model_.solid.mesh.model();
    if (k != mesh::ModelKind::Solid2D && k != mesh::ModelKind::Solid3D) {
      throw Error(ErrorKind::Config, "solid part must use a solid mesh");
    }
    model_.solid.material.validate();
  }
  for (const auto& s : model_.structures) {
    structural::check_compatible(s.mesh, s.theory);
    s.material.validate();
  }
  build_dofs();
  build_bulk();
  build_interfaces();
  build_constraints();
  build_loads();
}

int System::dofs_per_node(int part) const {
  if (part == 0) return model_.solid.mesh.dim();
  return structural::dofs_per_node(model_.structures.at(static_cast<size_t>(part - 1)).theory);
}

const Mesh& System::part_mesh(int part) const {
  if (part == 0) return model_.solid.mesh;
  if (part < 1 || part > static_cast<int>(model_.structures.size())) {
    throw Error(ErrorKind::Config, "part index out of range");
  }
  return model_.structures[static_cast<size_t>(part - 1)].mesh;
}

void System::build_dofs() {
  offsets_.clear();
  int n = 0;
  offsets_.push_back(0);
  if (model_.has_solid) n += model_.solid.mesh.dim() * model_.solid.mesh.num_nodes();
  for (size_t s = 0; s < model_.structures.size(); ++s) {
    offsets_.push_back(n);
    n += structural::dofs_per_node(model_.structures[s].theory) * model_.structures[s].mesh.num_nodes();
  }
  ndof_ = n;
}

void System::build_bulk() {
  Accumulator acc(ndof_);
  auto element_dofs = [&](int part, int e) {
    const Mesh& m = part_mesh(part);
    const int nd = dofs_per_node(part);
    std::vector<int> dofs;
    dofs.reserve(static_cast<size_t>(nd * m.nodes_per_element()));
    for (int a = 0; a < m.nodes_per_element(); ++a)
      for (int i = 0; i < nd; ++i) dofs.push_back(dof(part, m.ien()(e, a), i));
    return dofs;
  };
  if (model_.has_solid) {
    const Mesh& m = model_.solid.mesh;
    for (int e = 0; e < m.num_elements(); ++e) {
      acc.add(elasticity::stiffness_solid(m, e, model_.solid.material), element_dofs(0, e));
    }
  }
  labels_.assign(model_.structures.size(), {});
  inactive_.assign(model_.structures.size(), {});
  outside_.assign(model_.structures.size(), {});
  for (size_t s = 0; s < model_.structures.size(); ++s) {
    const auto& sp = model_.structures[s];
    const Mesh& m = sp.mesh;
    const int part = static_cast<int>(s) + 1;
    labels_[s].assign(static_cast<size_t>(m.num_elements()), Label::Standard);
    inactive_[s].assign(static_cast<size_t>(m.num_nodes()), false);
    outside_[s].assign(static_cast<size_t>(m.num_elements()), 1.0);
    if (sp.overlap) {
      labels_[s] = nonconforming::classify(m, sp.overlap->region);
      auto deact = nonconforming::deactivate(m, labels_[s], sp.overlap->region, sp.overlap->tau);
      inactive_[s] = deact.inactive;
      outside_[s] = deact.outside_fraction;
    }
    for (int e = 0; e < m.num_elements(); ++e) {
      const Label l = labels_[s][e];
      if (l == Label::Void) continue;
      Eigen::MatrixXd K;
      if (l == Label::Cut) {
        if (outside_[s][e] < sp.overlap->tau) continue;  // sliver guard
        K = nonconforming::integrate_cut(
            m, e, sp.overlap->region,
            [&](const elasticity::QuadratureSpec& q) { return structural::stiffness(m, e, sp.theory, sp.material, q); },
            sp.overlap->n_cut);
      } else {
        K = structural::stiffness(m, e, sp.theory, sp.material);
      }
      acc.add(K, element_dofs(part, e));
    }
  }
  bulk_ = acc.finish();
}

void System::build_interfaces() {
  interfaces_.clear();
  contexts_.clear();
  for (const auto& c : model_.couplings) {
    if (!model_.has_solid) throw Error(ErrorKind::Config, "coupling requires a solid part");
    if (c.structure < 0 || c.structure >= static_cast<int>(model_.structures.size())) {
      throw Error(ErrorKind::Config, "coupling refers to a missing structure");
    }
    if (c.alpha && !(*c.alpha > 0.0)) throw Error(ErrorKind::Config, "stabilization parameter must be positive");
    const auto& sp = model_.structures[static_cast<size_t>(c.structure)];
    interfaces_.push_back(coupling::build_interface(model_.solid.mesh, sp.mesh, c.locators, c.points));
    // A point on the boundary between a void and an active element belongs to
    // the active one; the void side only sees deactivated functions.
    const auto& lab = labels_[static_cast<size_t>(c.structure)];
    for (auto& ip : interfaces_.back().points) {
      if (lab[static_cast<size_t>(ip.struct_element)] != Label::Void) continue;
      const Eigen::VectorXd g = sp.mesh.map_to_physical(ip.struct_element, ip.struct_parent);
      for (int e = 0; e < sp.mesh.num_elements(); ++e) {
        if (lab[static_cast<size_t>(e)] == Label::Void) continue;
        const auto r = sp.mesh.inverse_map(e, g);
        if (r.inside) {
          ip.struct_element = e;
          ip.struct_parent = r.parent;
          break;
        }
      }
    }
    coupling::Context ctx;
    ctx.solid = &model_.solid.mesh;
    ctx.solid_material = model_.solid.material;
    ctx.structure = &sp.mesh;
    ctx.theory = sp.theory;
    ctx.struct_material = sp.material;
    ctx.solid_offset = offset(0);
    ctx.struct_offset = offset(c.structure + 1);
    contexts_.push_back(ctx);
  }
}

void System::fix(int d, double value) {
  if (constrained_[d]) {
    const double old = values_[d];
    if (std::abs(old - value) > 1e-12 * std::max({1.0, std::abs(old), std::abs(value)})) {
      std::ostringstream os;
      os << "conflicting Dirichlet values " << old << " and " << value << " on DOF " << d;
      throw Error(ErrorKind::Config, os.str());
    }
    return;
  }
  constrained_[d] = 1;
  values_[d] = value;
}

namespace {

std::vector<int> select_nodes(const Mesh& m, const Selection& s) {
  switch (s.kind) {
    case Selection::Kind::Side:
      if (s.rows < 1) throw Error(ErrorKind::Config, "side selection needs at least one row");
      return m.side_nodes(s.direction, s.side, s.rows);
    case Selection::Kind::Plane: return m.nodes_on_plane(s.point, s.normal, s.tol);
    case Selection::Kind::All: {
      std::vector<int> all(static_cast<size_t>(m.num_nodes()));
      for (int i = 0; i < m.num_nodes(); ++i) all[i] = i;
      return all;
    }
  }
  return {};
}

// L2 projection of every component of g onto the whole mesh space.
Eigen::MatrixXd project_patch(const Mesh& m, const Field& g, int ncomp) {
  const int n = m.num_nodes();
  std::vector<Eigen::Triplet<double>> t;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, ncomp);
  elasticity::QuadratureSpec q;
  q.points = *std::max_element(m.degrees().begin(), m.degrees().end()) + 2;
  for (int e = 0; e < m.num_elements(); ++e) {
    elasticity::integrate(m, e, q, 0, [&](const mesh::ShapeValues& sv, double w) {
      const Eigen::VectorXd gv = g(sv.x);
      for (int a = 0; a < sv.N.size(); ++a) {
        const int A = m.ien()(e, a);
        rhs.row(A) += w * sv.N[a] * gv.head(ncomp).transpose();
        for (int b = 0; b < sv.N.size(); ++b) t.emplace_back(A, m.ien()(e, b), w * sv.N[a] * sv.N[b]);
      }
    });
  }
  SparseMatrix M(n, n);
  M.setFromTriplets(t.begin(), t.end());
  SparseCholesky chol;
  if (!chol.factor(M)) throw Error(ErrorKind::Rank, "singular mass matrix in boundary projection");
  return chol.solve(rhs);
}

// L2 projection onto the functions of one side of a 3D spline patch.
Eigen::MatrixXd project_face(const Mesh& m, int direction, int side, const std::vector<int>& nodes, const Field& g,
                             int ncomp) {
  std::vector<int> local(static_cast<size_t>(m.num_nodes()), -1);
  for (size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<int>(i);
  const int n = static_cast<int>(nodes.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n), rhs = Eigen::MatrixXd::Zero(n, ncomp);
  const int pts = *std::max_element(m.degrees().begin(), m.degrees().end()) + 2;
  for (const auto& f : m.boundary_facets()) {
    if (f.direction != direction || f.side != side) continue;
    elasticity::integrate_facet(m, f, pts, 0, [&](const mesh::ShapeValues& sv, const Eigen::VectorXd&, double w) {
      const Eigen::VectorXd gv = g(sv.x);
      for (int a = 0; a < sv.N.size(); ++a) {
        const int la = local[m.ien()(f.element, a)];
        if (la < 0) continue;
        rhs.row(la) += w * sv.N[a] * gv.head(ncomp).transpose();
        for (int b = 0; b < sv.N.size(); ++b) {
          const int lb = local[m.ien()(f.element, b)];
          if (lb >= 0) M(la, lb) += w * sv.N[a] * sv.N[b];
        }
      }
    });
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 1e-13 * ldlt.vectorD().maxCoeff()) {
    throw Error(ErrorKind::Rank, "singular Gram matrix in face projection");
  }
  return ldlt.solve(rhs);
}

}  // namespace

std::vector<std::pair<int, double>> System::dirichlet_values(const DirichletBC& bc) const {
  if (bc.part == 0 && !model_.has_solid) throw Error(ErrorKind::Config, "boundary condition on a missing solid");
  const Mesh& m = part_mesh(bc.part);
  const int nd = dofs_per_node(bc.part);
  for (int c : bc.components) {
    if (c < 0 || c >= nd) throw Error(ErrorKind::Config, "boundary condition component out of range");
  }
  const auto nodes = select_nodes(m, bc.where);
  if (nodes.empty()) throw Error(ErrorKind::Config, "boundary condition selects no nodes");
  std::vector<std::pair<int, double>> out;
  auto check = [&](const Eigen::VectorXd& v) {
    if (v.size() < nd) throw Error(ErrorKind::Config, "boundary value has too few components");
    if (!v.allFinite()) throw Error(ErrorKind::Config, "boundary value is not finite");
  };
  if (!bc.value) {
    for (int A : nodes)
      for (int c : bc.components) out.emplace_back(dof(bc.part, A, c), 0.0);
    return out;
  }
  Eigen::MatrixXd vals = Eigen::MatrixXd::Zero(m.num_nodes(), nd);
  // open knot vectors interpolate at the patch ends only
  const bool interpolatory = m.basis() == mesh::BasisKind::Lagrange ||
                             (m.dim() == 1 && bc.where.kind == Selection::Kind::Side && bc.where.rows == 1);
  if (interpolatory) {
    for (int A : nodes) {
      const Eigen::VectorXd v = bc.value(m.nodes().row(A).transpose());
      check(v);
      vals.row(A) = v.head(nd).transpose();
    }
  } else if (bc.where.kind == Selection::Kind::Side && bc.where.rows == 1 && m.dim() == 2) {
    // edge of a 2D patch: univariate projection along the other direction
    const int other = 1 - bc.where.direction;
    const auto& kv = m.knots()[static_cast<size_t>(other)];
    const auto& kd = m.knots()[static_cast<size_t>(bc.where.direction)];
    const double fixed = bc.where.side == 0 ? kd.front() : kd.back();
    for (int c = 0; c < nd; ++c) {
      auto target = [&](double xi) {
        Eigen::VectorXd par(2);
        par[bc.where.direction] = fixed;
        par[other] = xi;
        const Eigen::VectorXd v = bc.value(m.param_to_physical(par));
        check(v);
        return v[c];
      };
      const auto pr = basis::least_squares_project(kv, target);
      for (int A : nodes) {
        const int i = m.node_grid_index(A)[other];
        vals(A, c) = pr.values[i];
      }
    }
  } else if (bc.where.kind == Selection::Kind::Side && bc.where.rows == 1 && m.dim() == 3) {
    const Eigen::MatrixXd v = project_face(m, bc.where.direction, bc.where.side, nodes, bc.value, nd);
    for (size_t i = 0; i < nodes.size(); ++i) vals.row(nodes[i]) = v.row(static_cast<int>(i));
  } else {
    vals = project_patch(m, bc.value, nd);
  }
  for (int A : nodes)
    for (int c : bc.components) out.emplace_back(dof(bc.part, A, c), vals(A, c));
  return out;
}

void System::build_constraints() {
  constrained_.assign(static_cast<size_t>(ndof_), 0);
  values_ = Eigen::VectorXd::Zero(ndof_);
  for (const auto& bc : model_.dirichlet) {
    for (const auto& [d, v] : dirichlet_values(bc)) fix(d, v);
  }
  for (size_t s = 0; s < model_.structures.size(); ++s) {
    const int part = static_cast<int>(s) + 1;
    for (int A = 0; A < static_cast<int>(inactive_[s].size()); ++A) {
      if (!inactive_[s][A]) continue;
      for (int c = 0; c < dofs_per_node(part); ++c) fix(dof(part, A, c), 0.0);
    }
  }
  free_.clear();
  free_index_.assign(static_cast<size_t>(ndof_), -1);
  for (int i = 0; i < ndof_; ++i) {
    if (!constrained_[i]) {
      free_index_[i] = static_cast<int>(free_.size());
      free_.push_back(i);
    }
  }
}

void System::build_loads() {
  load_ = Eigen::VectorXd::Zero(ndof_);
  for (const auto& pl : model_.point_loads) {
    const Mesh& m = part_mesh(pl.part);
    const int nd = dofs_per_node(pl.part);
    if (pl.force.size() != nd) throw Error(ErrorKind::Config, "point load has the wrong number of components");
    auto loc = m.locate(pl.x);
    if (!loc) throw Error(ErrorKind::Locate, "point load lies outside its part");
    const auto sv = m.shape(loc->element, loc->parent, 0);
    for (int a = 0; a < sv.N.size(); ++a)
      for (int i = 0; i < nd; ++i) load_[dof(pl.part, m.ien()(loc->element, a), i)] += sv.N[a] * pl.force[i];
  }
  if (model_.has_solid) {
    const Mesh& m = model_.solid.mesh;
    const int d = m.dim();
    for (const auto& tl : model_.tractions) {
      std::vector<mesh::Facet> facets;
      for (const auto& f : m.boundary_facets()) {
        if (f.direction != tl.direction || f.side != tl.side) continue;
        if (m.structured()) {
          const auto g = m.element_grid_index(f.element);
          if (g[f.direction] != (f.side == 0 ? 0 : m.grid_elements()[f.direction] - 1)) continue;
        }
        facets.push_back(f);
      }
      load_.segment(offset(0), d * m.num_nodes()) +=
          elasticity::traction_force(m, facets, tl.traction, model_.solid.material);
    }
    for (const auto& bl : model_.body_loads) {
      for (int e = 0; e < m.num_elements(); ++e) {
        const Eigen::VectorXd fe = elasticity::body_force(m, e, bl.b, model_.solid.material);
        for (int a = 0; a < m.nodes_per_element(); ++a) load_.segment(dof(0, m.ien()(e, a), 0), d) += fe.segment(d * a, d);
      }
    }
  } else if (!model_.tractions.empty() || !model_.body_loads.empty()) {
    throw Error(ErrorKind::Config, "solid loads given without a solid part");
  }
  for (const auto& dl : model_.distributed_loads) {
    const int s = dl.part - 1;
    if (s < 0 || s >= static_cast<int>(model_.structures.size())) throw Error(ErrorKind::Config, "bad load part");
    const auto& sp = model_.structures[static_cast<size_t>(s)];
    const Mesh& m = sp.mesh;
    const int nd = dofs_per_node(dl.part);
    for (int e = 0; e < m.num_elements(); ++e) {
      const Label l = labels_[s][e];
      if (l == Label::Void) continue;
      Eigen::VectorXd fe;
      if (l == Label::Cut) {
        if (outside_[s][e] < sp.overlap->tau) continue;
        fe = structural::distributed_load(m, e, sp.theory, dl.q, nonconforming::cut_rule(sp.overlap->region, sp.overlap->n_cut));
      } else {
        fe = structural::distributed_load(m, e, sp.theory, dl.q);
      }
      for (int a = 0; a < m.nodes_per_element(); ++a)
        for (int i = 0; i < nd; ++i) load_[dof(dl.part, m.ien()(e, a), i)] += fe[nd * a + i];
    }
  }
  for (const auto& el : model_.edge_loads) {
    const Mesh& m = part_mesh(el.part);
    if (m.model() != mesh::ModelKind::Plate) throw Error(ErrorKind::Config, "edge loads apply to plates");
    const int pts = *std::max_element(m.degrees().begin(), m.degrees().end()) + 2;
    for (const auto& f : m.boundary_facets()) {
      if (f.direction != el.direction || f.side != el.side) continue;
      elasticity::integrate_facet(m, f, pts, 0, [&](const mesh::ShapeValues& sv, const Eigen::VectorXd&, double w) {
        for (int a = 0; a < sv.N.size(); ++a) load_[dof(el.part, m.ien()(f.element, a), 0)] += w * el.q * sv.N[a];
      });
    }
  }
}

int System::num_inactive() const {
  int n = 0;
  for (const auto& v : inactive_) n += static_cast<int>(std::count(v.begin(), v.end(), true));
  return n;
}

SparseMatrix System::nitsche(int c) const {
  // alpha is irrelevant for the consistency terms
  return from_triplets(ndof_, coupling::assemble_coupling(contexts_.at(c), interfaces_.at(c), 1.0).nitsche);
}

SparseMatrix System::stabilization(int c) const {
  return from_triplets(ndof_, coupling::assemble_coupling(contexts_.at(c), interfaces_.at(c), 1.0).stabilization);
}

SparseMatrix System::flux(int c) const {
  return from_triplets(ndof_, coupling::assemble_flux(contexts_.at(c), interfaces_.at(c)));
}

SparseMatrix System::reduce(const SparseMatrix& A) const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<size_t>(A.nonZeros()));
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      const int i = free_index_[it.row()], j = free_index_[it.col()];
      if (i >= 0 && j >= 0) t.emplace_back(i, j, it.value());
    }
  SparseMatrix R(static_cast<int>(free_.size()), static_cast<int>(free_.size()));
  R.setFromTriplets(t.begin(), t.end());
  return R;
}

coupling::AlphaEstimate System::estimate(int c) const {
  return coupling::estimate_alpha(reduce(bulk_), reduce(flux(c)));
}

std::vector<double> System::alphas() const {
  std::vector<double> out;
  for (size_t c = 0; c < model_.couplings.size(); ++c) {
    if (model_.couplings[c].alpha) {
      out.push_back(*model_.couplings[c].alpha);
      continue;
    }
    const auto est = estimate(static_cast<int>(c));
    if (est.degenerate) throw Error(ErrorKind::Config, "interface flux vanishes; cannot estimate stabilization");
    out.push_back(est.alpha);
  }
  return out;
}

SparseMatrix System::matrix(const std::vector<double>& alphas) const {
  if (alphas.size() != model_.couplings.size()) throw Error(ErrorKind::Internal, "one alpha per coupling expected");
  SparseMatrix K = bulk_;
  for (size_t c = 0; c < alphas.size(); ++c) {
    if (!(alphas[c] > 0.0)) throw Error(ErrorKind::Config, "stabilization parameter must be positive");
    const auto terms = coupling::assemble_coupling(contexts_[c], interfaces_[c], alphas[c]);
    K += from_triplets(ndof_, terms.nitsche);
    K += alphas[c] * from_triplets(ndof_, terms.stabilization);
  }
  return K;
}

bool System::positive_definite(const std::vector<double>& alphas) const {
  SparseCholesky chol;
  return chol.factor(reduce(matrix(alphas)));
}

namespace {

// rhs - A x with long double accumulation
Eigen::VectorXd residual_extended(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) {
  std::vector<long double> acc(static_cast<size_t>(rhs.size()));
  for (int i = 0; i < rhs.size(); ++i) acc[static_cast<size_t>(i)] = rhs[i];
  for (int j = 0; j < A.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(A, j); it; ++it)
      acc[static_cast<size_t>(it.row())] -= static_cast<long double>(it.value()) * x[j];
  Eigen::VectorXd r(rhs.size());
  for (int i = 0; i < rhs.size(); ++i) r[i] = static_cast<double>(acc[static_cast<size_t>(i)]);
  return r;
}

}  // namespace

Solution System::solve(const std::vector<double>& alphas) const {
  const SparseMatrix K = matrix(alphas);
  const SparseMatrix Kff = reduce(K);
  Eigen::VectorXd ac = Eigen::VectorXd::Zero(ndof_);
  for (int i = 0; i < ndof_; ++i)
    if (constrained_[i]) ac[i] = values_[i];
  const Eigen::VectorXd lift = K * ac;
  Eigen::VectorXd rhs(static_cast<int>(free_.size()));
  for (size_t k = 0; k < free_.size(); ++k) rhs[static_cast<int>(k)] = load_[free_[k]] - lift[free_[k]];

  Solution s;
  s.alphas = alphas;
  s.a = ac;
  if (!free_.empty()) {
    SparseCholesky chol;
    if (!chol.factor(Kff)) {
      throw Error(ErrorKind::Definiteness,
                  "system matrix is not positive definite (stabilization parameter too small?)");
    }
    // Conjugate gradients preconditioned by the factorization, with true
    // residuals accumulated in extended precision. Plain refinement stalls
    // once large stabilization parameters push cond(K) near 1/eps.
    Eigen::VectorXd x = chol.solve(rhs);
    const double rn = rhs.norm();
    Eigen::VectorXd r = residual_extended(Kff, x, rhs);
    Eigen::VectorXd bestx = x;
    double best = r.norm();
    Eigen::VectorXd z = chol.solve(r), p = z;
    double rz = r.dot(z);
    for (int it = 0; it < 30 && best > 1e-14 * rn && rz > 0.0; ++it) {
      const Eigen::VectorXd Kp = Kff * p;
      const double pKp = p.dot(Kp);
      if (!(pKp > 0.0)) break;
      x += (rz / pKp) * p;
      r = residual_extended(Kff, x, rhs);
      if (r.norm() < best) {
        best = r.norm();
        bestx = x;
      }
      z = chol.solve(r);
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    x = bestx;
    s.residual = rn > 0.0 ? best / rn : best;
    for (size_t k = 0; k < free_.size(); ++k) s.a[free_[k]] = x[static_cast<int>(k)];
  }
  const Eigen::VectorXd r = K * s.a - load_;
  s.reactions = Eigen::VectorXd::Zero(ndof_);
  for (int i = 0; i < ndof_; ++i)
    if (constrained_[i]) s.reactions[i] = r[i];
  return s;
}

Sample System::recover(const Solution& s, int part, const Eigen::VectorXd& x) const {
  const Mesh& m = part_mesh(part);
  const int nd = dofs_per_node(part);
  Sample out;
  auto gather = [&](int e) {
    Eigen::VectorXd ae(nd * m.nodes_per_element());
    for (int a = 0; a < m.nodes_per_element(); ++a)
      for (int i = 0; i < nd; ++i) ae[nd * a + i] = s.a[dof(part, m.ien()(e, a), i)];
    return ae;
  };
  if (part == 0) {
    auto loc = m.locate(x);
    if (!loc) throw Error(ErrorKind::Locate, "sample point lies outside the solid");
    const auto sv = m.shape(loc->element, loc->parent, 1);
    const Eigen::VectorXd ae = gather(loc->element);
    out.u = elasticity::displacement_matrix(sv, m.dim()) * ae;
    out.sigma = elasticity::constitutive_solid(model_.solid.material, m.dim()) *
                (elasticity::strain_displacement(sv, m.dim()) * ae);
    return out;
  }
  const auto& sp = model_.structures[static_cast<size_t>(part - 1)];
  double off = 0.0;
  const Eigen::VectorXd g = coupling::structure_coordinates(m, x, &off);
  auto loc = m.locate(g);
  if (!loc) throw Error(ErrorKind::Locate, "sample point lies outside the structure");
  const auto so = coupling::structure_operators(m, sp.theory, sp.material, loc->element, loc->parent, off);
  const Eigen::VectorXd ae = gather(loc->element);
  out.u = so.U * ae;
  const Eigen::VectorXd sr = so.S * ae;
  if (structural::is_beam(sp.theory)) {
    out.sigma = sr;
  } else {
    out.sigma = Eigen::VectorXd::Zero(6);
    out.sigma[0] = sr[0];
    out.sigma[1] = sr[1];
    out.sigma[3] = sr[2];
    if (sr.size() == 5) {
      out.sigma[4] = sr[3];
      out.sigma[5] = sr[4];
    }
  }
  return out;
}

double System::jump_energy(const Solution& s) const {
  double e = 0.0;
  for (size_t c = 0; c < model_.couplings.size(); ++c) {
    const SparseMatrix Kst = stabilization(static_cast<int>(c));
    e += s.alphas.at(c) * s.a.dot(Kst * s.a);
  }
  return e;
}

coupling::AlphaEstimate estimate_stabilization(const Model& model) {
  System sys(model);
  if (model.couplings.empty()) throw Error(ErrorKind::Config, "model has no coupling");
  return sys.estimate(0);
}

}  // namespace mixdim::system
