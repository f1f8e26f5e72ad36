#include <gtest/gtest.h>

#include <algorithm>

#include "helpers.hpp"
#include "mixdim/bench.hpp"
#include "mixdim/config.hpp"
#include "mixdim/nonconforming.hpp"
#include "mixdim/structural.hpp"
#include "mixdim/system.hpp"

using namespace mixdim;
using namespace mixdim::nonconforming;
using mesh::BasisKind;
using mesh::Mesh;
using mesh::ModelKind;
using testing_util::kind_of;
using testing_util::vec;

namespace {

OverlapRegion box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  OverlapRegion r;
  r.lower = std::move(lo);
  r.upper = std::move(hi);
  return r;
}

int count(const std::vector<Label>& l, Label x) { return static_cast<int>(std::count(l.begin(), l.end(), x)); }

double measure_outside(const Mesh& m, int e, const OverlapRegion& r, int n_cut = 10) {
  const Eigen::MatrixXd v = integrate_cut(
      m, e, r,
      [&](const elasticity::QuadratureSpec& q) {
        double s = 0.0;
        elasticity::integrate(m, e, q, 0, [&](const mesh::ShapeValues&, double w) { s += w; });
        return Eigen::MatrixXd::Constant(1, 1, s);
      },
      n_cut);
  return v(0, 0);
}

}  // namespace

TEST(NonconformingClassify, NoneAndAll) {
  auto plate = Mesh::build(ModelKind::Plate, BasisKind::Spline, {3}, {4, 4}, {0, 0}, {4, 4});
  const auto far = classify(plate, box(vec({10, 10}), vec({12, 12})));
  EXPECT_EQ(count(far, Label::Standard), 16);
  const auto all = classify(plate, box(vec({-1, -1}), vec({5, 5})));
  EXPECT_EQ(count(all, Label::Void), 16);
  // touching the patch edge only: nothing is cut
  const auto edge = classify(plate, box(vec({4, 0}), vec({6, 4})));
  EXPECT_EQ(count(edge, Label::Standard), 16);
}

TEST(NonconformingClassify, EmbeddedSquareRing) {
  auto plate = Mesh::build(ModelKind::Plate, BasisKind::Spline, {3}, {20, 20}, {0, 0}, {400, 400});
  const auto l = classify(plate, box(vec({150, 150}), vec({250, 250})));
  EXPECT_EQ(count(l, Label::Standard), 364);
  EXPECT_EQ(count(l, Label::Cut), 20);
  EXPECT_EQ(count(l, Label::Void), 16);
  // shifting by a full element keeps the counts, by half an element changes them
  const auto s = classify(plate, box(vec({170, 150}), vec({270, 250})));
  EXPECT_EQ(count(s, Label::Void), 16);
  const auto h = classify(plate, box(vec({160, 150}), vec({260, 250})));
  EXPECT_EQ(count(h, Label::Void), 5 * 4);
  EXPECT_EQ(count(h, Label::Cut), 2 * 5);
}

TEST(NonconformingClassify, RegionDimensionChecked) {
  auto beam = Mesh::build(ModelKind::Beam, BasisKind::Spline, {3}, {4}, {0}, {4});
  EXPECT_EQ(kind_of([&] { classify(beam, box(vec({0, 0}), vec({1, 1}))); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([&] { classify(beam, box(vec({2}), vec({1}))); }), ErrorKind::Config);
}

TEST(NonconformingDeactivate, SliverKeepsNeighboursActive) {
  auto beam = Mesh::build(ModelKind::Beam, BasisKind::Lagrange, {1}, {4}, {0}, {4});  // nodes 0..4
  const auto r = box(vec({-1}), vec({1.995}));
  const auto labels = classify(beam, r);
  EXPECT_EQ(labels[0], Label::Void);
  EXPECT_EQ(labels[1], Label::Cut);
  const auto d = deactivate(beam, labels, r, 0.01);
  EXPECT_NEAR(d.outside_fraction[1], 0.005, 1e-12);
  EXPECT_TRUE(d.inactive[0]);
  EXPECT_TRUE(d.inactive[1]);
  EXPECT_FALSE(d.inactive[2]);
  EXPECT_FALSE(d.inactive[3]);
  EXPECT_EQ(kind_of([&] { deactivate(beam, labels, r, 1.0); }), ErrorKind::Config);
}

TEST(NonconformingDeactivate, ThresholdMonotone) {
  auto plate = Mesh::build(ModelKind::Plate, BasisKind::Spline, {3}, {10, 4}, {0, 0}, {20, 4});
  const auto r = box(vec({-1, -1}), vec({7.3, 5}));
  const auto labels = classify(plate, r);
  int prev = -1;
  for (double tau : {0.0, 0.01, 0.05, 0.1, 0.2}) {
    const auto d = deactivate(plate, labels, r, tau);
    const int n = static_cast<int>(std::count(d.inactive.begin(), d.inactive.end(), true));
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(NonconformingCut, HalfElementMeasure) {
  auto beam = Mesh::build(ModelKind::Beam, BasisKind::Lagrange, {1}, {1}, {0}, {2});
  EXPECT_NEAR(measure_outside(beam, 0, box(vec({-1}), vec({1}))), 1.0, 0.01);
  EXPECT_NEAR(outside_fraction(beam, 0, box(vec({-1}), vec({1}))), 0.5, 1e-15);
  auto plate = Mesh::build(ModelKind::Plate, BasisKind::Spline, {2}, {1, 1}, {0, 0}, {2, 2});
  EXPECT_NEAR(measure_outside(plate, 0, box(vec({-1, -1}), vec({1, 3}))), 2.0, 0.02);
}

TEST(NonconformingCut, MeasureDecreasesAsRegionGrows) {
  auto beam = Mesh::build(ModelKind::Beam, BasisKind::Lagrange, {1}, {1}, {0}, {1});
  double prev = 2.0;
  for (double u : {0.0, 0.2, 0.4, 0.6, 0.8}) {
    const double m = measure_outside(beam, 0, box(vec({-1}), vec({u})));
    EXPECT_LE(m, prev + 1e-15);
    prev = m;
  }
}

TEST(NonconformingCut, EmptyRegionMatchesStandardRule) {
  const elasticity::Material m = [] {
    elasticity::Material x{1000.0, 0.3};
    x.thickness = 0.5;
    return x;
  }();
  auto beam = Mesh::build(ModelKind::Beam, BasisKind::Spline, {3}, {2}, {0}, {4});
  const auto far = box(vec({10}), vec({11}));
  const Eigen::MatrixXd Kc = integrate_cut(beam, 0, far, [&](const elasticity::QuadratureSpec& q) {
    return structural::stiffness(beam, 0, structural::Theory::Timoshenko, m, q);
  });
  const Eigen::MatrixXd K = structural::stiffness(beam, 0, structural::Theory::Timoshenko, m);
  EXPECT_LT((Kc - K).norm(), 1e-10 * K.norm());
}

TEST(NonconformingCut, NoPointOutsideIsDegenerate) {
  auto beam = Mesh::build(ModelKind::Beam, BasisKind::Lagrange, {1}, {4}, {0}, {4});
  // 0.005 of element [1, 2] remains: every Gauss point of the 10-point rule is covered
  EXPECT_EQ(kind_of([&] { measure_outside(beam, 1, box(vec({-1}), vec({1.995}))); }), ErrorKind::DegenerateCut);
  EXPECT_EQ(kind_of([&] { measure_outside(beam, 1, box(vec({-1}), vec({1.5})), 0); }), ErrorKind::Config);
}

// Overlap ending exactly on a beam node reproduces the conforming model.
TEST(NonconformingSystem, CutOnElementBoundaryEqualsConforming) {
  auto conf = config::parse(bench::case_config("timo-q4-conforming")).model;
  system::Model nc = conf;
  auto& sp = nc.structures[0];
  sp.mesh = Mesh::build(ModelKind::Beam, BasisKind::Lagrange, {1}, {58}, {0.0}, {48.0});
  system::Overlap ov;
  ov.region = box(vec({0.0}), vec({24.0}));
  sp.overlap = ov;
  system::System a(conf), b(nc);
  EXPECT_EQ(b.num_inactive(), 29);  // nodes left of x = 24
  const auto sa = a.solve(), sb = b.solve();
  for (double x : {30.0, 40.0, 48.0}) {
    const double ua = a.recover(sa, 1, vec({x, 0.0})).u[1];
    const double ub = b.recover(sb, 1, vec({x, 0.0})).u[1];
    EXPECT_NEAR(ub, ua, 1e-8 * std::abs(ua)) << "x = " << x;
  }
}

TEST(NonconformingSystem, TimoshenkoOverlapDefinite) {
  const auto rc = config::parse(bench::case_config("timo-nonconforming-29.97"));
  system::System sys(rc.model);
  int cut = 0;
  for (auto l : sys.labels(0)) cut += l == Label::Cut;
  EXPECT_EQ(cut, 1);
  EXPECT_GT(sys.num_inactive(), 0);
  const auto alphas = sys.alphas();
  EXPECT_TRUE(sys.positive_definite(alphas));
}
