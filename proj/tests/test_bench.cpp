#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "mixdim/bench.hpp"
#include "mixdim/config.hpp"
#include "mixdim/output.hpp"

using namespace mixdim;
using bench::json;
using testing_util::kind_of;
using testing_util::vec;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mixdim_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string config_error(const json& j) {
  try {
    config::parse(j);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    return e.what();
  }
  return "";
}

}  // namespace

TEST(BenchExact, TimoshenkoClosedForm) {
  const config::TimoshenkoBeam b;
  EXPECT_DOUBLE_EQ(b.I(), 18.0);
  EXPECT_NEAR(b.displacement(48.0, 0.0)[1], -0.0690, 5e-5);
  EXPECT_NEAR(b.displacement(48.0, 0.0)[1], -1000.0 / (6 * 3e7 * 18) * 223560.0, 1e-15);
  // clamped section: axis fixed, axial displacement zero at the outer fibres
  EXPECT_EQ(b.displacement(0.0, 0.0)[1], 0.0);
  EXPECT_NEAR(b.displacement(0.0, 3.0)[0], 0.0, 1e-18);
  EXPECT_NEAR(b.stress(12.0, 2.0)[0], 4000.0, 1e-10);
  EXPECT_NEAR(b.stress(12.0, 0.0)[2], -250.0, 1e-10);
  EXPECT_NEAR(b.stress(30.0, 3.0)[2], 0.0, 1e-12);
  EXPECT_EQ(b.stress(5.0, 1.0)[1], 0.0);
}

TEST(BenchCases, AllConfigsParse) {
  const auto& names = bench::case_names();
  EXPECT_GE(names.size(), 9u);
  for (const auto& n : names) {
    SCOPED_TRACE(n);
    EXPECT_TRUE(bench::has_case(n));
    const auto rc = config::parse(bench::case_config(n));
    EXPECT_FALSE(rc.name.empty());
  }
  EXPECT_FALSE(bench::has_case("nope"));
  EXPECT_EQ(kind_of([] { bench::case_config("nope"); }), ErrorKind::Config);
}

TEST(BenchCases, ShippedConfigsParse) {
  int n = 0;
  for (const auto& entry : fs::directory_iterator(MIXDIM_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    SCOPED_TRACE(entry.path().string());
    EXPECT_NO_THROW(config::load(entry.path().string()));
    ++n;
  }
  EXPECT_GE(n, 10);
  EXPECT_EQ(kind_of([] { config::load("/nonexistent/config.json"); }), ErrorKind::Io);
}

TEST(BenchConfig, ErrorsNameTheKeyPath) {
  json j = bench::case_config("timo-q4-conforming");
  json typo = j;
  typo["solid"]["materal"] = typo["solid"]["material"];
  EXPECT_NE(config_error(typo).find("'solid.materal': unknown key"), std::string::npos);

  json neg = j;
  neg["couplings"][0]["alpha"] = -1.0;
  EXPECT_NE(config_error(neg).find("'couplings[0].alpha'"), std::string::npos);

  json type = j;
  type["solid"]["spans"] = "many";
  EXPECT_NE(config_error(type).find("'solid.spans'"), std::string::npos);

  json missing = j;
  missing["solid"].erase("kind");
  EXPECT_NE(config_error(missing).find("'solid.kind'"), std::string::npos);

  json top = j;
  top["extra"] = 1;
  EXPECT_NE(config_error(top).find("'extra'"), std::string::npos);
}

TEST(BenchMetric, RelationsAndL2) {
  bench::Metric le{"a", 0.5, "<=", 0.0, 1.0}, ge{"b", 0.5, ">=", 1.0, 0.0}, in{"c", 2.0, "in", 1.0, 3.0};
  EXPECT_TRUE(le.pass());
  EXPECT_FALSE(ge.pass());
  EXPECT_TRUE(in.pass());
  bench::Metric nan{"d", std::nan(""), "<=", 0.0, 1.0};
  EXPECT_FALSE(nan.pass());
  const std::vector<double> s{0, 1, 2, 3}, e{1, 2, 3, 4}, v{2, 4, 6, 8};
  EXPECT_DOUBLE_EQ(bench::relative_l2(s, e, e), 0.0);
  EXPECT_NEAR(bench::relative_l2(s, v, e), 1.0, 1e-15);
}

TEST(BenchOutput, VonMisesAndNumbers) {
  EXPECT_NEAR(output::von_mises(vec({5, 0, 0})), 5.0, 1e-14);
  EXPECT_NEAR(output::von_mises(vec({0, 0, 2})), 2.0 * std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(output::von_mises(vec({1, 1, 1, 0, 0, 0})), 0.0, 1e-14);
  EXPECT_NEAR(output::von_mises(vec({0, 0, 0, 0, 1, 0})), std::sqrt(3.0), 1e-14);
  EXPECT_EQ(output::format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(output::format_number(-2.0), "-2");
}

TEST(BenchRun, DeterministicAndRoundTrip) {
  const fs::path a = scratch("a"), b = scratch("b"), c = scratch("c");
  const auto rep = bench::run_case("timo-q4-conforming", a.string());
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.dofs, 992);
  bench::run_case("timo-q4-conforming", b.string());
  const std::string csv = slurp(a / "timo-q4-conforming.centerline.csv");
  ASSERT_FALSE(csv.empty());
  EXPECT_EQ(csv, slurp(b / "timo-q4-conforming.centerline.csv"));
  EXPECT_EQ(csv.rfind("s,x,y,z,ux,uy,uz,sxx,syy,szz,sxy,syz,sxz,part\n", 0), 0u);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 98);

  // dumped effective config reproduces the same table
  const auto dumped = config::json::parse(slurp(a / "timo-q4-conforming.config.json"));
  bench::run_config(dumped, c.string());
  EXPECT_EQ(csv, slurp(c / "timo-q4-conforming.centerline.csv"));

  const auto report = config::json::parse(slurp(a / "timo-q4-conforming.report.json"));
  EXPECT_EQ(report["case"], "timo-q4-conforming");
  EXPECT_TRUE(report["pass"].get<bool>());

  const std::string vtk = slurp(a / "timo-q4-conforming.vtk");
  EXPECT_EQ(vtk.rfind("# vtk DataFile Version 3.0\n", 0), 0u);
  EXPECT_NE(vtk.find("ASCII"), std::string::npos);
  EXPECT_NE(vtk.find("DATASET UNSTRUCTURED_GRID"), std::string::npos);
  EXPECT_NE(vtk.find("VECTORS displacement double"), std::string::npos);
  EXPECT_NE(vtk.find("SCALARS von_mises double 1"), std::string::npos);
  for (const auto& p : {a, b, c}) fs::remove_all(p);
}
