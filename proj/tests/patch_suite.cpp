#include "patch_suite.hpp"

#include <cmath>

namespace patch {

using namespace mixdim;
using Eigen::VectorXd;
using mesh::BasisKind;
using mesh::Mesh;
using mesh::ModelKind;

namespace {

constexpr double kE = 1000.0, kH = 2.0;
constexpr double kEps = 1e-3, kKappa = 1e-3;

bool is_plate(Variant v) { return v == Variant::PlateKirchhoff || v == Variant::PlateMindlin; }

structural::Theory theory(Variant v) {
  switch (v) {
    case Variant::BeamEB: return structural::Theory::EulerBernoulli;
    case Variant::PlateKirchhoff: return structural::Theory::Kirchhoff;
    case Variant::PlateMindlin: return structural::Theory::Mindlin;
    default: return structural::Theory::Timoshenko;
  }
}

struct Exact {
  VectorXd u, sigma;
};

// Local 2D field (beam frame) and its stress.
Exact local2d(Variant v, State s, const Eigen::Vector2d& x) {
  Exact e{VectorXd::Zero(2), VectorXd::Zero(3)};
  if (s == State::Rigid) {
    const double t1 = v == Variant::BeamEB ? 0.0 : 0.3, t2 = -0.2, w = 0.01;
    e.u << t1 - w * x[1], t2 + w * x[0];
  } else if (s == State::ConstantStress && v == Variant::BeamEB) {
    e.u << -kKappa * x[0] * x[1], 0.5 * kKappa * x[0] * x[0];
    e.sigma << -kE * kKappa * x[1], 0.0, 0.0;
  } else if (s == State::ConstantStress) {
    e.u << kEps * x[0], 0.0;
    e.sigma << kE * kEps, 0.0, 0.0;
  }
  return e;
}

Exact global2d(const Case& c, State s, const Eigen::Vector2d& xg) {
  const Eigen::Matrix2d Q = rotation(c.phi);
  const Exact l = local2d(c.variant, s, Q.transpose() * xg);
  Eigen::Matrix2d S;
  S << l.sigma[0], l.sigma[2], l.sigma[2], l.sigma[1];
  const Eigen::Matrix2d Sg = Q * S * Q.transpose();
  Exact g{Q * l.u, VectorXd(3)};
  g.sigma << Sg(0, 0), Sg(1, 1), Sg(0, 1);
  return g;
}

Exact plate3d(State s, const Eigen::Vector3d& x) {
  Exact e{VectorXd::Zero(3), VectorXd::Zero(6)};
  if (s == State::Rigid) {
    const double a = 0.01, b = -0.02, t3 = 0.3;
    e.u << -a * x[2], -b * x[2], t3 + a * x[0] + b * x[1];
  } else if (s == State::ConstantStress) {
    e.u << -kKappa * x[0] * x[2], 0.0, 0.5 * kKappa * x[0] * x[0];
    e.sigma[0] = -kE * kKappa * x[2];
  }
  return e;
}

}  // namespace

Eigen::Matrix2d rotation(double phi) {
  Eigen::Matrix2d Q;
  Q << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return Q;
}

std::vector<Case> cases() {
  return {{"beam-euler-bernoulli", Variant::BeamEB},
          {"beam-timoshenko", Variant::BeamTimoshenko},
          {"plate-kirchhoff", Variant::PlateKirchhoff},
          {"plate-mindlin", Variant::PlateMindlin},
          {"frame-0", Variant::Frame, 0.0},
          {"frame-pi/6", Variant::Frame, M_PI / 6},
          {"frame-pi/2", Variant::Frame, M_PI / 2}};
}

system::Model build(const Case& c, State s) {
  system::Model m;
  m.solid.material = {kE, 0.0};
  system::StructurePart sp;
  sp.theory = theory(c.variant);
  sp.material = {kE, 0.0};
  sp.material.thickness = kH;
  system::CouplingSpec cs;
  system::DirichletBC clamp;
  clamp.part = 0;
  clamp.where.direction = 0;
  clamp.where.side = 0;

  if (is_plate(c.variant)) {
    m.solid.mesh = Mesh::build(ModelKind::Solid3D, BasisKind::Spline, {3}, {3, 2, 2}, {0, 0, -1}, {10, 4, 2});
    sp.mesh = Mesh::build(ModelKind::Plate, BasisKind::Spline, {3}, {3, 2}, {10, 0}, {10, 4});
    coupling::PlaneLocator L{Eigen::Vector3d(10, 2, 0), Eigen::Vector3d(1, 0, 0)};
    cs.locators.push_back(L);
    clamp.components = {0, 1, 2};
    if (s != State::TipShear) clamp.value = [s](const VectorXd& x) { return plate3d(s, x).u; };
  } else {
    const Eigen::Matrix2d Q = rotation(c.phi);
    m.solid.mesh = Mesh::build(ModelKind::Solid2D, BasisKind::Spline, {3}, {4, 2}, {0, -1}, {10, 2});
    if (c.phi != 0.0) m.solid.mesh.transform(Q, Eigen::Vector2d::Zero());
    sp.mesh = Mesh::build(ModelKind::Beam, BasisKind::Spline, {3}, {4}, {10}, {10});
    sp.mesh.placement.angle = c.phi;
    coupling::PlaneLocator L{Q * Eigen::Vector2d(10, 0), Q * Eigen::Vector2d(1, 0)};
    cs.locators.push_back(L);
    clamp.components = {0, 1};
    if (s != State::TipShear) clamp.value = [c, s](const VectorXd& x) { return global2d(c, s, x.head<2>()).u; };
  }
  m.structures.push_back(sp);
  m.couplings.push_back(cs);
  m.dirichlet.push_back(clamp);

  // far end of the structure
  if (s == State::ConstantStress) {
    system::DirichletBC end;
    end.part = 1;
    end.where.direction = 0;
    end.where.side = 1;
    switch (c.variant) {
      case Variant::BeamEB:
        end.where.rows = 2;
        end.components = {0};
        end.value = [](const VectorXd& x) { return VectorXd::Constant(1, 0.5 * kKappa * x[0] * x[0]); };
        m.dirichlet.push_back(end);
        break;
      case Variant::PlateKirchhoff:
        end.where.rows = 2;
        end.components = {0};
        end.value = [](const VectorXd& x) { return VectorXd::Constant(1, 0.5 * kKappa * x[0] * x[0]); };
        m.dirichlet.push_back(end);
        break;
      case Variant::PlateMindlin:
        end.components = {0, 1, 2};
        end.value = [](const VectorXd& x) {
          VectorXd v(3);
          v << 0.5 * kKappa * x[0] * x[0], kKappa * x[0], 0.0;
          return v;
        };
        m.dirichlet.push_back(end);
        break;
      default: {
        // axial force equivalent to the uniform stress E * eps over the section
        const Eigen::Vector2d F = rotation(c.phi) * Eigen::Vector2d(kE * kEps * kH, 0.0);
        m.point_loads.push_back({1, VectorXd::Constant(1, 20.0), Eigen::Vector3d(F[0], F[1], 0.0)});
      }
    }
  } else if (s == State::TipShear) {
    if (is_plate(c.variant)) {
      m.edge_loads.push_back({1, 0, 1, -1.0});
    } else {
      const Eigen::Vector2d F = rotation(c.phi) * Eigen::Vector2d(0.0, -1.0);
      VectorXd f = VectorXd::Zero(structural::dofs_per_node(sp.theory));
      f[0] = F[0];
      if (f.size() > 1) {
        f[1] = F[1];
      } else {
        f[0] = -1.0;  // rotation-free beam carries w only
      }
      m.point_loads.push_back({1, VectorXd::Constant(1, 20.0), f});
    }
  }
  return m;
}

Result run(const Case& c, State s) {
  const system::Model model = build(c, s);
  system::System sys(model);
  std::vector<double> alphas = sys.alphas();
  for (double& a : alphas) a *= 2.0;  // safety factor over lambda_1 / 2
  const auto sol = sys.solve(alphas);

  Result r;
  r.name = c.name;
  r.jump_energy = std::abs(sys.jump_energy(sol));
  r.jump_bound = 1e-9 * alphas[0] * sol.a.squaredNorm();
  r.stress_bound = 1e-8 * kE;

  auto track = [&](int part, const VectorXd& x, const VectorXd& exact) {
    const VectorXd sg = sys.recover(sol, part, x).sigma;
    r.stress_error = std::max(r.stress_error, (sg - exact).cwiseAbs().maxCoeff());
  };
  if (is_plate(c.variant)) {
    for (double x : {0.5, 5.0, 9.9})
      for (double y : {0.5, 2.0, 3.5})
        for (double z : {-0.9, 0.0, 0.9}) track(0, Eigen::Vector3d(x, y, z), plate3d(s, Eigen::Vector3d(x, y, z)).sigma);
    for (double x : {10.1, 15.0, 19.9})
      for (double y : {0.5, 3.5})
        for (double z : {-0.9, 0.0, 0.9}) track(1, Eigen::Vector3d(x, y, z), plate3d(s, Eigen::Vector3d(x, y, z)).sigma);
  } else {
    const Eigen::Matrix2d Q = rotation(c.phi);
    for (double x : {0.5, 3.0, 5.0, 7.5, 9.9})
      for (double y : {-0.9, 0.0, 0.9}) {
        const Eigen::Vector2d xg = Q * Eigen::Vector2d(x, y);
        track(0, xg, global2d(c, s, xg).sigma);
      }
    for (double x : {10.1, 15.0, 19.9})
      for (double y : {-0.9, 0.0, 0.9}) {
        const Eigen::Vector2d xg = Q * Eigen::Vector2d(x, y);
        track(1, xg, global2d(c, s, xg).sigma);
      }
  }
  return r;
}

}  // namespace patch
