#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mixdim/bench.hpp"
#include "mixdim/config.hpp"
#include "mixdim/linear_solver.hpp"
#include "mixdim/system.hpp"

using namespace mixdim;
using mesh::BasisKind;
using mesh::Mesh;
using mesh::ModelKind;
using testing_util::kind_of;
using testing_util::vec;

namespace {

system::Model case_model(const std::string& name) { return config::parse(bench::case_config(name)).model; }

const auto rigid = [](const Eigen::VectorXd& x) { return vec({0.3 - 0.01 * x[1], -0.2 + 0.01 * x[0]}); };

system::Model clamped_square(BasisKind basis, int p) {
  system::Model m;
  m.solid.mesh = Mesh::build(ModelKind::Solid2D, basis, {p}, {5, 4}, {0, 0}, {5, 4});
  m.solid.material = {1000.0, 0.3};
  for (int dir : {0, 1})
    for (int side : {0, 1}) {
      system::DirichletBC bc;
      bc.where.direction = dir;
      bc.where.side = side;
      bc.components = {0, 1};
      bc.value = rigid;
      m.dirichlet.push_back(bc);
    }
  return m;
}

}  // namespace

TEST(SystemAssembly, Q4CaseSizeAndSymmetry) {
  system::System sys(case_model("timo-q4-conforming"));
  EXPECT_EQ(sys.num_dofs(), 992);
  EXPECT_EQ(sys.offset(1), 41 * 11 * 2);
  const SparseMatrix K = sys.matrix({4.7128e7});
  const SparseMatrix Kt = K.transpose();
  EXPECT_LE((K - Kt).norm(), 1e-12 * K.norm());
}

TEST(SystemAssembly, UncoupledPartsAreBlockDiagonal) {
  auto m = case_model("timo-q4-conforming");
  m.couplings.clear();
  system::System sys(m);
  const SparseMatrix K = sys.matrix({});
  const int split = sys.offset(1);
  for (int k = 0; k < K.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(K, k); it; ++it) {
      if ((it.row() < split) != (it.col() < split)) {
        EXPECT_EQ(it.value(), 0.0);
      }
    }
}

TEST(SystemDirichlet, LagrangeValuesAreNodal) {
  system::System sys(clamped_square(BasisKind::Lagrange, 1));
  const auto& m = sys.part_mesh(0);
  int fixed = 0;
  for (int A = 0; A < m.num_nodes(); ++A) {
    const Eigen::VectorXd x = m.nodes().row(A).transpose();
    if (!sys.constrained()[sys.dof(0, A, 0)]) continue;
    ++fixed;
    EXPECT_DOUBLE_EQ(sys.constrained_values()[sys.dof(0, A, 0)], rigid(x)[0]);
    EXPECT_DOUBLE_EQ(sys.constrained_values()[sys.dof(0, A, 1)], rigid(x)[1]);
  }
  EXPECT_EQ(fixed, 6 * 5 - 4 * 3);
}

TEST(SystemSolve, RigidBoundaryDataGivesRigidInterior) {
  for (auto [basis, p] : {std::pair{BasisKind::Lagrange, 1}, std::pair{BasisKind::Spline, 3}}) {
    system::System sys(clamped_square(basis, p));
    const auto sol = sys.solve(std::vector<double>{});
    for (auto x : {vec({2.5, 2.0}), vec({0.7, 3.1}), vec({4.2, 0.4})}) {
      const auto s = sys.recover(sol, 0, x);
      EXPECT_LT((s.u - rigid(x)).norm(), 1e-10);
      EXPECT_LT(s.sigma.cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(SystemSolve, ConflictingDirichletRejected) {
  auto m = clamped_square(BasisKind::Lagrange, 1);
  m.dirichlet[1].value = [](const Eigen::VectorXd&) { return vec({1.0, 1.0}); };
  m.dirichlet[2].value = [](const Eigen::VectorXd&) { return vec({0.0, 0.0}); };
  EXPECT_EQ(kind_of([&] { system::System s(m); }), ErrorKind::Config);
  auto bad = clamped_square(BasisKind::Lagrange, 1);
  bad.dirichlet[0].components = {2};
  EXPECT_EQ(kind_of([&] { system::System s(bad); }), ErrorKind::Config);
}

TEST(SystemSolve, SmallStabilizationIsIndefinite) {
  auto m = case_model("timo-q4-conforming");
  m.couplings[0].alpha.reset();
  system::System sys(m);
  const auto est = sys.estimate(0);
  EXPECT_EQ(kind_of([&] { sys.solve({est.lambda1 / 200.0}); }), ErrorKind::Definiteness);
}

TEST(SystemSolve, Q4ResidualAndStressSample) {
  system::System sys(case_model("timo-q4-conforming"));
  const auto sol = sys.solve();
  EXPECT_LE(sol.residual, 1e-10);
  const config::TimoshenkoBeam beam;
  const auto s = sys.recover(sol, 0, vec({12.0, 2.0}));
  EXPECT_NEAR(s.sigma[0], beam.stress(12.0, 2.0)[0], 0.05 * 4000.0);
  EXPECT_NEAR(beam.stress(12.0, 2.0)[0], 4000.0, 1e-9);
  EXPECT_EQ(kind_of([&] { sys.recover(sol, 0, vec({100.0, 0.0})); }), ErrorKind::Locate);
  EXPECT_EQ(kind_of([&] { sys.recover(sol, 1, vec({10.0, 0.0})); }), ErrorKind::Locate);
}

TEST(SystemSolve, SplineStressAtSamplePoint) {
  system::System sys(case_model("timo-spline-conforming"));
  const auto sol = sys.solve();
  const auto s = sys.recover(sol, 0, vec({12.0, 2.0}));
  EXPECT_NEAR(s.sigma[0], 4000.0, 0.01 * 4000.0);
}

TEST(SystemSolve, ReactionsBalanceLoad) {
  system::System sys(case_model("timo-q4-conforming"));
  const auto sol = sys.solve();
  double ry = 0.0;
  for (int A = 0; A < sys.part_mesh(0).num_nodes(); ++A) ry += sol.reactions[sys.dof(0, A, 1)];
  EXPECT_NEAR(ry, 1000.0, 1e-6);
}

// Reordering the structures (and every index that refers to them) leaves the solution unchanged.
TEST(SystemSolve, StructureOrderInvariance) {
  auto a = case_model("frame");
  auto b = a;
  std::swap(b.structures[0], b.structures[1]);
  for (auto& c : b.couplings) c.structure = 1 - c.structure;
  const auto swap_part = [](int p) { return p == 0 ? 0 : 3 - p; };
  for (auto& d : b.dirichlet) d.part = swap_part(d.part);
  for (auto& l : b.point_loads) l.part = swap_part(l.part);
  system::System sa(a), sb(b);
  const auto ua = sa.solve(), ub = sb.solve();
  double scale = 0.0, diff = 0.0;
  for (auto x : {vec({0.0, 11.0}), vec({1.0, 12.0}), vec({0.2, 11.8})}) {
    const auto pa = sa.recover(ua, 0, x).u, pb = sb.recover(ub, 0, x).u;
    scale = std::max(scale, pa.norm());
    diff = std::max(diff, (pa - pb).norm());
  }
  const auto ga = sa.recover(ua, 2, vec({8.0, 12.0})).u, gb = sb.recover(ub, 1, vec({8.0, 12.0})).u;
  diff = std::max(diff, (ga - gb).norm());
  EXPECT_LE(diff, 1e-10 * std::max(scale, ga.norm()));
}

TEST(SystemCholesky, MatchesDenseSolve) {
  SparseMatrix one(1, 1);
  one.insert(0, 0) = 4.0;
  SparseCholesky c1;
  ASSERT_TRUE(c1.factor(one));
  EXPECT_DOUBLE_EQ(c1.solve(vec({8.0}))[0], 2.0);

  std::mt19937 rng(42);
  std::normal_distribution<double> g;
  const int n = 40;
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = g(rng);
  Eigen::MatrixXd A = M * M.transpose() + n * Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(i - j) > 5) A(i, j) = 0.0;
  A += 10.0 * n * Eigen::MatrixXd::Identity(n, n);  // keep it definite after banding
  const SparseMatrix S = A.sparseView();
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = g(rng);
  SparseCholesky c;
  ASSERT_TRUE(c.factor(S));
  const Eigen::VectorXd x = c.solve(b), xd = A.llt().solve(b);
  EXPECT_LE((x - xd).norm(), 1e-10 * xd.norm());

  Eigen::MatrixXd I = -Eigen::MatrixXd::Identity(3, 3);
  SparseCholesky neg;
  EXPECT_FALSE(neg.factor(SparseMatrix(I.sparseView())));
  EXPECT_FALSE(SparseCholesky::backend().empty());
}
