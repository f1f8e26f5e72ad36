#include "mixdim/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "mixdim/errors.hpp"
#include "mixdim/quadrature.hpp"

namespace mixdim::mesh {

int parametric_dim(ModelKind kind) {
  switch (kind) {
    case ModelKind::Solid2D: return 2;
    case ModelKind::Solid3D: return 3;
    case ModelKind::Beam: return 1;
    case ModelKind::Plate: return 2;
  }
  return 0;
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Solid2D: return "solid2d";
    case ModelKind::Solid3D: return "solid3d";
    case ModelKind::Beam: return "beam";
    case ModelKind::Plate: return "plate";
  }
  return "?";
}

std::string to_string(BasisKind kind) { return kind == BasisKind::Lagrange ? "lagrange" : "spline"; }

namespace {

struct Univariate {
  Eigen::VectorXd N, dN, d2N;  // derivatives with respect to the parent coordinate
};

std::vector<int> broadcast(std::vector<int> v, int dim, const char* what) {
  if (v.size() == 1) v.assign(static_cast<size_t>(dim), v[0]);
  if (static_cast<int>(v.size()) != dim) {
    throw Error(ErrorKind::Config, std::string(what) + " needs 1 or " + std::to_string(dim) + " entries");
  }
  return v;
}

// local tensor index -> per-direction indices
inline std::array<int, 3> split_local(int a, const std::array<int, 3>& n) {
  return {a % n[0], (a / n[0]) % n[1], a / (n[0] * n[1])};
}

}  // namespace

Mesh Mesh::build(ModelKind kind, BasisKind basis, std::vector<int> degrees, std::vector<int> spans,
                 std::vector<double> lower, std::vector<double> extent) {
  const int d = parametric_dim(kind);
  degrees = broadcast(std::move(degrees), d, "degrees");
  spans = broadcast(std::move(spans), d, "spans");
  if (static_cast<int>(lower.size()) != d || static_cast<int>(extent.size()) != d) {
    throw Error(ErrorKind::Config, "box origin/extent dimension mismatch");
  }
  for (int k = 0; k < d; ++k) {
    if (degrees[k] < 1) throw Error(ErrorKind::Config, "degree must be at least 1");
    if (spans[k] < 1) throw Error(ErrorKind::Config, "need at least one element per direction");
    if (!(extent[k] > 0.0)) throw Error(ErrorKind::Config, "box extents must be positive");
  }

  if (basis == BasisKind::Spline) {
    std::vector<basis::KnotVector> kv;
    for (int k = 0; k < d; ++k) kv.push_back(basis::KnotVector::open_uniform(degrees[k], spans[k], 0.0, spans[k]));
    std::array<int, 3> n{1, 1, 1};
    for (int k = 0; k < d; ++k) n[k] = kv[k].num_basis();
    Eigen::MatrixXd cp(n[0] * n[1] * n[2], d);
    std::vector<std::vector<double>> g(d);
    for (int k = 0; k < d; ++k) g[k] = kv[k].greville();
    for (int c = 0; c < n[2]; ++c)
      for (int b = 0; b < n[1]; ++b)
        for (int a = 0; a < n[0]; ++a) {
          const int A = a + n[0] * (b + n[1] * c);
          const std::array<int, 3> idx{a, b, c};
          for (int k = 0; k < d; ++k) cp(A, k) = lower[k] + extent[k] * g[k][idx[k]] / spans[k];
        }
    return spline_patch(kind, std::move(kv), std::move(cp));
  }

  for (int k = 0; k < d; ++k) {
    if (degrees[k] != 1) throw Error(ErrorKind::Config, "Lagrange meshes support linear elements only");
  }
  if (kind == ModelKind::Solid3D) throw Error(ErrorKind::Config, "Lagrange 3D solid elements are not supported");
  std::array<int, 3> ne{1, 1, 1}, nn{1, 1, 1};
  for (int k = 0; k < d; ++k) {
    ne[k] = spans[k];
    nn[k] = spans[k] + 1;
  }
  Eigen::MatrixXd nodes(nn[0] * nn[1] * nn[2], d);
  for (int c = 0; c < nn[2]; ++c)
    for (int b = 0; b < nn[1]; ++b)
      for (int a = 0; a < nn[0]; ++a) {
        const std::array<int, 3> idx{a, b, c};
        const int A = a + nn[0] * (b + nn[1] * c);
        for (int k = 0; k < d; ++k) nodes(A, k) = lower[k] + extent[k] * idx[k] / spans[k];
      }
  const int nen = 1 << d;
  Eigen::MatrixXi ien(ne[0] * ne[1] * ne[2], nen);
  for (int c = 0; c < ne[2]; ++c)
    for (int b = 0; b < ne[1]; ++b)
      for (int a = 0; a < ne[0]; ++a) {
        const int e = a + ne[0] * (b + ne[1] * c);
        for (int loc = 0; loc < nen; ++loc) {
          const int i = loc & 1, j = (loc >> 1) & 1, k = (loc >> 2) & 1;
          ien(e, loc) = (a + i) + nn[0] * ((b + j) + nn[1] * (c + k));
        }
      }
  Mesh m = lagrange(kind, std::move(nodes), std::move(ien));
  m.grid_elements_.assign(ne.begin(), ne.begin() + d);
  m.grid_nodes_.assign(nn.begin(), nn.begin() + d);
  return m;
}

Mesh Mesh::spline_patch(ModelKind kind, std::vector<basis::KnotVector> knots, Eigen::MatrixXd control_points) {
  Mesh m;
  m.model_ = kind;
  m.basis_ = BasisKind::Spline;
  m.dim_ = parametric_dim(kind);
  const int d = m.dim_;
  if (static_cast<int>(knots.size()) != d) throw Error(ErrorKind::Config, "one knot vector per parametric direction");
  std::array<int, 3> n{1, 1, 1}, ne{1, 1, 1}, nloc{1, 1, 1};
  for (int k = 0; k < d; ++k) {
    if (knots[k].degree() < 1) throw Error(ErrorKind::Config, "degree must be at least 1");
    m.degrees_.push_back(knots[k].degree());
    n[k] = knots[k].num_basis();
    ne[k] = knots[k].num_spans();
    nloc[k] = knots[k].degree() + 1;
  }
  if (control_points.rows() != n[0] * n[1] * n[2] || control_points.cols() != d) {
    throw Error(ErrorKind::Config, "control point array does not match the knot vectors");
  }
  m.knots_ = std::move(knots);
  m.nodes_ = std::move(control_points);
  m.grid_elements_.assign(ne.begin(), ne.begin() + d);
  m.grid_nodes_.assign(n.begin(), n.begin() + d);
  const int nen = nloc[0] * nloc[1] * nloc[2];
  m.ien_.resize(ne[0] * ne[1] * ne[2], nen);
  m.elem_spans_.resize(static_cast<size_t>(m.ien_.rows()));
  for (int c = 0; c < ne[2]; ++c)
    for (int b = 0; b < ne[1]; ++b)
      for (int a = 0; a < ne[0]; ++a) {
        const int e = a + ne[0] * (b + ne[1] * c);
        const std::array<int, 3> s{a, b, c};
        m.elem_spans_[e] = s;
        std::array<int, 3> first{0, 0, 0};
        for (int k = 0; k < d; ++k) first[k] = m.knots_[k].spans()[s[k]] - m.knots_[k].degree();
        for (int loc = 0; loc < nen; ++loc) {
          const auto ix = split_local(loc, nloc);
          m.ien_(e, loc) = (first[0] + ix[0]) + n[0] * ((first[1] + ix[1]) + n[1] * (first[2] + ix[2]));
        }
      }
  return m;
}

Mesh Mesh::lagrange(ModelKind kind, Eigen::MatrixXd nodes, Eigen::MatrixXi ien) {
  Mesh m;
  m.model_ = kind;
  m.basis_ = BasisKind::Lagrange;
  m.dim_ = parametric_dim(kind);
  if (nodes.cols() != m.dim_) throw Error(ErrorKind::Config, "node coordinates have the wrong dimension");
  if (ien.cols() != (1 << m.dim_)) throw Error(ErrorKind::Config, "element connectivity has the wrong width");
  if (ien.size() > 0 && (ien.minCoeff() < 0 || ien.maxCoeff() >= nodes.rows())) {
    throw Error(ErrorKind::Config, "connectivity references a missing node");
  }
  m.degrees_.assign(static_cast<size_t>(m.dim_), 1);
  m.nodes_ = std::move(nodes);
  m.ien_ = std::move(ien);
  return m;
}

Mesh Mesh::merge(const Mesh& a, const Mesh& b, double tol) {
  if (a.basis_ != BasisKind::Lagrange || b.basis_ != BasisKind::Lagrange || a.model_ != b.model_) {
    throw Error(ErrorKind::Config, "only Lagrange meshes of the same kind can be merged");
  }
  std::vector<int> map(static_cast<size_t>(b.num_nodes()), -1);
  std::vector<Eigen::VectorXd> extra;
  for (int i = 0; i < b.num_nodes(); ++i) {
    for (int j = 0; j < a.num_nodes(); ++j) {
      if ((a.nodes_.row(j) - b.nodes_.row(i)).norm() <= tol) {
        map[i] = j;
        break;
      }
    }
    if (map[i] < 0) {
      map[i] = a.num_nodes() + static_cast<int>(extra.size());
      extra.push_back(b.nodes_.row(i).transpose());
    }
  }
  Eigen::MatrixXd nodes(a.num_nodes() + static_cast<int>(extra.size()), a.dim_);
  nodes.topRows(a.num_nodes()) = a.nodes_;
  for (size_t i = 0; i < extra.size(); ++i) nodes.row(a.num_nodes() + static_cast<int>(i)) = extra[i].transpose();
  Eigen::MatrixXi ien(a.num_elements() + b.num_elements(), a.nodes_per_element());
  ien.topRows(a.num_elements()) = a.ien_;
  for (int e = 0; e < b.num_elements(); ++e)
    for (int l = 0; l < b.nodes_per_element(); ++l) ien(a.num_elements() + e, l) = map[b.ien_(e, l)];
  Mesh m = lagrange(a.model_, std::move(nodes), std::move(ien));
  m.placement = a.placement;
  return m;
}

int Mesh::min_degree() const { return *std::min_element(degrees_.begin(), degrees_.end()); }

std::array<int, 3> Mesh::element_grid_index(int e) const {
  if (!structured()) throw Error(ErrorKind::Internal, "mesh has no grid structure");
  std::array<int, 3> n{1, 1, 1};
  for (int k = 0; k < dim_; ++k) n[k] = grid_elements_[k];
  return split_local(e, n);
}

std::array<int, 3> Mesh::node_grid_index(int node) const {
  if (!structured()) throw Error(ErrorKind::Internal, "mesh has no grid structure");
  std::array<int, 3> n{1, 1, 1};
  for (int k = 0; k < dim_; ++k) n[k] = grid_nodes_[k];
  return split_local(node, n);
}

std::pair<double, double> Mesh::element_param_range(int e, int direction) const {
  if (basis_ != BasisKind::Spline) return {-1.0, 1.0};
  const auto& kv = knots_[direction];
  const int s = kv.spans()[elem_spans_[e][direction]];
  return {kv.knot(s), kv.knot(s + 1)};
}

ShapeValues Mesh::shape(int e, const Eigen::VectorXd& parent, int deriv_order) const {
  const int d = dim_;
  std::array<Univariate, 3> uv;
  std::array<int, 3> nloc{1, 1, 1};
  for (int k = 0; k < d; ++k) {
    const double t = parent[k];
    if (basis_ == BasisKind::Lagrange) {
      uv[k].N = Eigen::Vector2d(0.5 * (1.0 - t), 0.5 * (1.0 + t));
      uv[k].dN = Eigen::Vector2d(-0.5, 0.5);
      uv[k].d2N = Eigen::Vector2d::Zero();
      nloc[k] = 2;
    } else {
      const auto& kv = knots_[k];
      const int s = kv.spans()[elem_spans_[e][k]];
      const double a = kv.knot(s), b = kv.knot(s + 1);
      const double h = 0.5 * (b - a);
      auto bv = basis::eval_basis_in_span(kv, s, a + (t + 1.0) * h, std::max(1, deriv_order));
      uv[k].N = bv.N;
      uv[k].dN = bv.dN * h;
      uv[k].d2N = bv.d2N * (h * h);
      nloc[k] = kv.degree() + 1;
    }
  }
  for (int k = d; k < 3; ++k) {
    uv[k].N = Eigen::VectorXd::Ones(1);
    uv[k].dN = Eigen::VectorXd::Zero(1);
    uv[k].d2N = Eigen::VectorXd::Zero(1);
  }

  const int nen = nloc[0] * nloc[1] * nloc[2];
  const int nsec = d * (d + 1) / 2;
  static constexpr int kPairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 2}, {0, 2}};
  auto pair_of = [&](int c, int& l, int& m) {
    if (d == 1) { l = m = 0; return; }
    if (d == 2) {
      static constexpr int p2[3][2] = {{0, 0}, {1, 1}, {0, 1}};
      l = p2[c][0];
      m = p2[c][1];
      return;
    }
    l = kPairs[c][0];
    m = kPairs[c][1];
  };

  ShapeValues sv;
  sv.element = e;
  sv.N.resize(nen);
  Eigen::MatrixXd dNp(nen, d);
  Eigen::MatrixXd d2Np;
  if (deriv_order >= 2) d2Np.resize(nen, nsec);
  for (int a = 0; a < nen; ++a) {
    const auto ix = split_local(a, nloc);
    const double n0 = uv[0].N[ix[0]], n1 = uv[1].N[ix[1]], n2 = uv[2].N[ix[2]];
    sv.N[a] = n0 * n1 * n2;
    const double v[3] = {n0, n1, n2};
    const double g[3] = {uv[0].dN[ix[0]], uv[1].dN[ix[1]], uv[2].dN[ix[2]]};
    const double h[3] = {uv[0].d2N[ix[0]], uv[1].d2N[ix[1]], uv[2].d2N[ix[2]]};
    for (int l = 0; l < d; ++l) {
      double prod = g[l];
      for (int k = 0; k < 3; ++k)
        if (k != l) prod *= v[k];
      dNp(a, l) = prod;
    }
    if (deriv_order >= 2) {
      for (int c = 0; c < nsec; ++c) {
        int l, m;
        pair_of(c, l, m);
        double prod = (l == m) ? h[l] : g[l] * g[m];
        for (int k = 0; k < 3; ++k)
          if (k != l && k != m) prod *= v[k];
        d2Np(a, c) = prod;
      }
    }
  }

  Eigen::MatrixXd X(nen, d);
  for (int a = 0; a < nen; ++a) X.row(a) = nodes_.row(ien_(e, a));
  sv.x = X.transpose() * sv.N;
  sv.J = X.transpose() * dNp;
  sv.detJ = sv.J.determinant();
  if (!(sv.detJ > 0.0)) {
    std::ostringstream os;
    os << "element " << e << " has non-positive Jacobian determinant " << sv.detJ;
    throw Error(ErrorKind::InvertedElement, os.str());
  }
  const Eigen::MatrixXd Jinv = sv.J.inverse();
  sv.dN = dNp * Jinv;

  if (deriv_order >= 2) {
    // Geometry curvature correction: G_i = sum_a X_ai * d2N_a/dp dp.
    std::vector<Eigen::MatrixXd> G(d, Eigen::MatrixXd::Zero(d, d));
    auto unpack = [&](int a, Eigen::MatrixXd& H) {
      H.setZero(d, d);
      for (int c = 0; c < nsec; ++c) {
        int l, m;
        pair_of(c, l, m);
        H(l, m) = H(m, l) = d2Np(a, c);
      }
    };
    Eigen::MatrixXd H;
    for (int a = 0; a < nen; ++a) {
      unpack(a, H);
      for (int i = 0; i < d; ++i) G[i] += X(a, i) * H;
    }
    sv.d2N.resize(nen, nsec);
    for (int a = 0; a < nen; ++a) {
      unpack(a, H);
      for (int i = 0; i < d; ++i) H -= sv.dN(a, i) * G[i];
      const Eigen::MatrixXd Hx = Jinv.transpose() * H * Jinv;
      for (int c = 0; c < nsec; ++c) {
        int l, m;
        pair_of(c, l, m);
        sv.d2N(a, c) = Hx(l, m);
      }
    }
  }
  return sv;
}

Eigen::VectorXd Mesh::map_to_physical(int e, const Eigen::VectorXd& parent) const { return shape(e, parent, 1).x; }

Eigen::MatrixXd Mesh::jacobian(int e, const Eigen::VectorXd& parent, double* det) const {
  auto sv = shape(e, parent, 1);
  if (det) *det = sv.detJ;
  return sv.J;
}

InverseMapResult Mesh::inverse_map(int e, const Eigen::VectorXd& x) const {
  const double diam = element_diameter(e);
  InverseMapResult r;
  r.parent = Eigen::VectorXd::Zero(dim_);
  auto sv = shape(e, r.parent, 1);
  Eigen::VectorXd res = sv.x - x;
  double rn = res.norm();
  const double tol = 1e-13 * diam;
  for (int it = 0; it < 50; ++it) {
    r.iterations = it;
    if (rn <= tol) break;
    Eigen::VectorXd step = sv.J.partialPivLu().solve(res);
    double lambda = 1.0;
    bool accepted = false;
    for (int half = 0; half < 30; ++half) {
      Eigen::VectorXd trial = r.parent - lambda * step;
      auto st = shape(e, trial, 1);
      Eigen::VectorXd rt = st.x - x;
      if (rt.norm() < rn || half == 29) {
        r.parent = trial;
        sv = std::move(st);
        res = rt;
        accepted = rt.norm() < rn;
        rn = rt.norm();
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted && rn > 1e-10 * diam) {
      throw Error(ErrorKind::NoConvergence, "Newton inverse map stalled");
    }
    if ((lambda * step).norm() < 1e-15) break;
  }
  if (rn > 1e-10 * diam) {
    std::ostringstream os;
    os << "Newton inverse map did not converge in element " << e << " (residual " << rn << ")";
    throw Error(ErrorKind::NoConvergence, os.str());
  }
  r.inside = (r.parent.array().abs() <= 1.0 + 1e-8).all();
  return r;
}

std::optional<Located> Mesh::locate(const Eigen::VectorXd& x, double tol) const {
  for (int e = 0; e < num_elements(); ++e) {
    auto [lo, hi] = element_bbox(e);
    const double slack = tol * (hi - lo).norm() + 1e-12;
    if (((x - lo).array() < -slack).any() || ((x - hi).array() > slack).any()) continue;
    InverseMapResult r;
    try {
      r = inverse_map(e, x);
    } catch (const Error&) {
      continue;
    }
    if ((r.parent.array().abs() <= 1.0 + tol).all()) {
      Located l;
      l.element = e;
      l.parent = r.parent.cwiseMax(-1.0).cwiseMin(1.0);
      return l;
    }
  }
  return std::nullopt;
}

Eigen::VectorXd Mesh::param_to_physical(const Eigen::VectorXd& param) const {
  if (basis_ != BasisKind::Spline) throw Error(ErrorKind::Internal, "parameter map requires a spline mesh");
  std::array<basis::BasisValues, 3> bv;
  std::array<int, 3> nloc{1, 1, 1}, n{1, 1, 1};
  for (int k = 0; k < dim_; ++k) {
    bv[k] = basis::eval_basis(knots_[k], param[k], 0);
    nloc[k] = knots_[k].degree() + 1;
    n[k] = knots_[k].num_basis();
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_);
  for (int a = 0; a < nloc[0] * nloc[1] * nloc[2]; ++a) {
    const auto ix = split_local(a, nloc);
    double w = 1.0;
    std::array<int, 3> gi{0, 0, 0};
    for (int k = 0; k < dim_; ++k) {
      w *= bv[k].N[ix[k]];
      gi[k] = bv[k].first + ix[k];
    }
    x += w * nodes_.row(gi[0] + n[0] * (gi[1] + n[1] * gi[2])).transpose();
  }
  return x;
}

std::vector<Facet> Mesh::boundary_facets() const {
  std::vector<Facet> out;
  if (structured()) {
    for (int e = 0; e < num_elements(); ++e) {
      const auto g = element_grid_index(e);
      for (int k = 0; k < dim_; ++k) {
        if (g[k] == 0) out.push_back({e, k, 0});
        if (g[k] == grid_elements_[k] - 1) out.push_back({e, k, 1});
      }
    }
    return out;
  }
  // Unstructured Lagrange: faces owned by a single element.
  std::map<std::vector<int>, int> count;
  auto face_key = [&](int e, int k, int s) {
    std::vector<int> key;
    for (int a = 0; a < nodes_per_element(); ++a) {
      if (((a >> k) & 1) == s) key.push_back(ien_(e, a));
    }
    std::sort(key.begin(), key.end());
    return key;
  };
  for (int e = 0; e < num_elements(); ++e)
    for (int k = 0; k < dim_; ++k)
      for (int s = 0; s < 2; ++s) ++count[face_key(e, k, s)];
  for (int e = 0; e < num_elements(); ++e)
    for (int k = 0; k < dim_; ++k)
      for (int s = 0; s < 2; ++s)
        if (count[face_key(e, k, s)] == 1) out.push_back({e, k, s});
  return out;
}

bool Mesh::is_boundary_facet(const Facet& f) const {
  if (f.element < 0 || f.element >= num_elements() || f.direction < 0 || f.direction >= dim_ ||
      (f.side != 0 && f.side != 1)) {
    return false;
  }
  const auto all = boundary_facets();
  return std::find(all.begin(), all.end(), f) != all.end();
}

void Mesh::facet_geometry(const Facet& f, const Eigen::VectorXd& parent, Eigen::VectorXd& normal,
                          double& measure_density) const {
  double det = 0.0;
  const Eigen::MatrixXd J = jacobian(f.element, parent, &det);
  // Nanson: n dA = det J * J^{-T} N dA_parent.
  Eigen::VectorXd g = J.inverse().transpose().col(f.direction);
  if (f.side == 0) g = -g;
  const double gn = g.norm();
  normal = g / gn;
  measure_density = det * gn;
}

std::vector<int> Mesh::side_nodes(int direction, int side, int rows) const {
  if (!structured()) throw Error(ErrorKind::Config, "side selection needs a structured mesh");
  if (direction < 0 || direction >= dim_) throw Error(ErrorKind::Config, "side direction out of range");
  std::vector<int> out;
  const int n = grid_nodes_[direction];
  for (int A = 0; A < num_nodes(); ++A) {
    const int i = node_grid_index(A)[direction];
    if ((side == 0 && i < rows) || (side == 1 && i >= n - rows)) out.push_back(A);
  }
  return out;
}

std::vector<int> Mesh::nodes_on_plane(const Eigen::VectorXd& point, const Eigen::VectorXd& normal,
                                      double tol) const {
  std::vector<int> out;
  for (int A = 0; A < num_nodes(); ++A) {
    if (std::abs((nodes_.row(A).transpose() - point).dot(normal)) <= tol) out.push_back(A);
  }
  return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> Mesh::element_bbox(int e) const {
  Eigen::VectorXd lo = nodes_.row(ien_(e, 0)).transpose(), hi = lo;
  for (int a = 1; a < nodes_per_element(); ++a) {
    lo = lo.cwiseMin(nodes_.row(ien_(e, a)).transpose());
    hi = hi.cwiseMax(nodes_.row(ien_(e, a)).transpose());
  }
  return {lo, hi};
}

double Mesh::element_diameter(int e) const {
  auto [lo, hi] = element_bbox(e);
  return (hi - lo).norm();
}

double Mesh::element_measure(int e) const {
  const auto rule = quad::tensor_rule(dim_, std::max(2, *std::max_element(degrees_.begin(), degrees_.end()) + 1));
  double m = 0.0;
  for (size_t q = 0; q < rule.w.size(); ++q) {
    Eigen::VectorXd p(dim_);
    for (int k = 0; k < dim_; ++k) p[k] = rule.x[q][k];
    double det = 0.0;
    jacobian(e, p, &det);
    m += rule.w[q] * det;
  }
  return m;
}

void Mesh::transform(const Eigen::MatrixXd& Q, const Eigen::VectorXd& t) {
  if (model_ != ModelKind::Solid2D && model_ != ModelKind::Solid3D) {
    throw Error(ErrorKind::Config, "only solid meshes can be transformed; use the placement for reduced models");
  }
  for (int i = 0; i < num_nodes(); ++i) nodes_.row(i) = (Q * nodes_.row(i).transpose() + t).transpose();
}

Eigen::VectorXd Mesh::to_global(const Eigen::VectorXd& x) const {
  switch (model_) {
    case ModelKind::Beam: {
      Eigen::VectorXd g(2);
      g = placement.origin + x[0] * Eigen::Vector2d(std::cos(placement.angle), std::sin(placement.angle));
      return g;
    }
    case ModelKind::Plate: {
      Eigen::VectorXd g(3);
      g << x[0], x[1], placement.mid_surface;
      return g;
    }
    default: return x;
  }
}

}  // namespace mixdim::mesh
