#include "mixdim/nonconforming.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mixdim/errors.hpp"
#include "mixdim/quadrature.hpp"

namespace mixdim::nonconforming {

using mesh::Mesh;

double OverlapRegion::level_set(const Eigen::VectorXd& x) const {
  double phi = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < x.size(); ++k) phi = std::max({phi, lower[k] - x[k], x[k] - upper[k]});
  return phi;
}

const char* to_string(Label l) {
  switch (l) {
    case Label::Standard: return "standard";
    case Label::Cut: return "cut";
    case Label::Void: return "void";
  }
  return "?";
}

namespace {

void check_region(const Mesh& mesh, const OverlapRegion& r) {
  if (r.lower.size() != mesh.dim() || r.upper.size() != mesh.dim()) {
    throw Error(ErrorKind::Config, "overlap region dimension does not match the structure mesh");
  }
  if (((r.upper - r.lower).array() <= 0.0).any()) throw Error(ErrorKind::Config, "overlap region is empty");
}

// image box of the element (corner images)
std::pair<Eigen::VectorXd, Eigen::VectorXd> corner_box(const Mesh& mesh, int e) {
  const int d = mesh.dim();
  Eigen::VectorXd lo, hi, p(d);
  for (int c = 0; c < (1 << d); ++c) {
    for (int k = 0; k < d; ++k) p[k] = ((c >> k) & 1) ? 1.0 : -1.0;
    const Eigen::VectorXd x = mesh.map_to_physical(e, p);
    if (c == 0) {
      lo = hi = x;
    } else {
      lo = lo.cwiseMin(x);
      hi = hi.cwiseMax(x);
    }
  }
  return {lo, hi};
}

}  // namespace

std::vector<Label> classify(const Mesh& mesh, const OverlapRegion& region) {
  check_region(mesh, region);
  const int d = mesh.dim();
  std::vector<Label> labels(static_cast<size_t>(mesh.num_elements()), Label::Standard);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const int m = *std::max_element(mesh.degrees().begin(), mesh.degrees().end()) + 2;
    // corners, then an m^d interior grid
    std::vector<double> ticks = {-1.0, 1.0};
    for (int i = 0; i < m; ++i) ticks.push_back(-1.0 + 2.0 * (i + 1) / (m + 1));
    const int t = static_cast<int>(ticks.size());
    int total = 1;
    for (int k = 0; k < d; ++k) total *= t;
    bool any_in = false, any_out = false;
    Eigen::VectorXd p(d);
    for (int s = 0; s < total; ++s) {
      int r = s;
      bool corner_or_interior = true;
      int n_end = 0;
      for (int k = 0; k < d; ++k) {
        const int i = r % t;
        r /= t;
        p[k] = ticks[i];
        n_end += i < 2;
      }
      // keep corners (all coordinates at +-1) and fully interior points
      corner_or_interior = n_end == d || n_end == 0;
      if (!corner_or_interior) continue;
      const Eigen::VectorXd x = mesh.map_to_physical(e, p);
      any_in = any_in || region.inside(x);
      any_out = any_out || region.outside(x);
    }
    if (!any_out) {
      labels[e] = Label::Void;
    } else if (!any_in) {
      labels[e] = Label::Standard;
    } else {
      labels[e] = Label::Cut;
    }
  }
  return labels;
}

double outside_fraction(const Mesh& mesh, int e, const OverlapRegion& region) {
  check_region(mesh, region);
  auto [lo, hi] = corner_box(mesh, e);
  double vol = 1.0, overlap = 1.0;
  for (int k = 0; k < mesh.dim(); ++k) {
    vol *= hi[k] - lo[k];
    overlap *= std::max(0.0, std::min(hi[k], region.upper[k]) - std::max(lo[k], region.lower[k]));
  }
  return std::clamp(1.0 - overlap / vol, 0.0, 1.0);
}

Deactivation deactivate(const Mesh& mesh, const std::vector<Label>& labels, const OverlapRegion& region,
                        double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw Error(ErrorKind::Config, "coverage threshold must lie in [0, 1)");
  Deactivation out;
  const int ne = mesh.num_elements();
  out.outside_fraction.resize(static_cast<size_t>(ne));
  std::vector<double> support(static_cast<size_t>(mesh.num_nodes()), 0.0), outside(support);
  for (int e = 0; e < ne; ++e) {
    const double f = labels[e] == Label::Void ? 0.0
                     : labels[e] == Label::Standard ? 1.0
                                                    : outside_fraction(mesh, e, region);
    out.outside_fraction[e] = f;
    const double meas = mesh.element_measure(e);
    for (int a = 0; a < mesh.nodes_per_element(); ++a) {
      support[mesh.ien()(e, a)] += meas;
      outside[mesh.ien()(e, a)] += f * meas;
    }
  }
  out.inactive.assign(static_cast<size_t>(mesh.num_nodes()), false);
  for (int A = 0; A < mesh.num_nodes(); ++A) out.inactive[A] = outside[A] < tau * support[A];
  for (int e = 0; e < ne; ++e) {
    if (labels[e] != Label::Cut || out.outside_fraction[e] < tau) continue;  // slivers are dropped anyway
    bool all = true;
    for (int a = 0; a < mesh.nodes_per_element(); ++a) all = all && out.inactive[mesh.ien()(e, a)];
    if (all) {
      std::ostringstream os;
      os << "every function of cut element " << e << " is inactive";
      throw Error(ErrorKind::OverDeactivation, os.str());
    }
  }
  return out;
}

elasticity::QuadratureSpec cut_rule(const OverlapRegion& region, int n_cut) {
  elasticity::QuadratureSpec q;
  q.points = n_cut;
  q.skip = [region](const Eigen::VectorXd& x) { return region.inside(x); };
  return q;
}

Eigen::MatrixXd integrate_cut(const Mesh& mesh, int e, const OverlapRegion& region,
                              const std::function<Eigen::MatrixXd(const elasticity::QuadratureSpec&)>& kernel,
                              int n_cut) {
  check_region(mesh, region);
  if (n_cut < 1) throw Error(ErrorKind::Config, "cut rule needs at least one point");
  const auto q = cut_rule(region, n_cut);
  const int used = elasticity::integrate(mesh, e, q, 0, [](const mesh::ShapeValues&, double) {});
  if (used == 0) {
    std::ostringstream os;
    os << "no quadrature point of cut element " << e << " lies outside the solid";
    throw Error(ErrorKind::DegenerateCut, os.str());
  }
  return kernel(q);
}

}  // namespace mixdim::nonconforming
