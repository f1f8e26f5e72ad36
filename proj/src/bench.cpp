#include "mixdim/bench.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include "mixdim/errors.hpp"

namespace mixdim::bench {

using Eigen::VectorXd;
using config::TimoshenkoBeam;

bool Metric::pass() const {
  if (!std::isfinite(value)) return relation == "info";
  if (relation == "<=") return value <= hi;
  if (relation == ">=") return value >= lo;
  if (relation == "in") return value >= lo && value <= hi;
  return true;
}

bool Report::pass() const {
  for (const auto& m : metrics)
    if (!m.pass()) return false;
  return true;
}

const Metric& Report::metric(const std::string& n) const {
  for (const auto& m : metrics)
    if (m.name == n) return m;
  throw Error(ErrorKind::Internal, "report '" + name + "' has no metric '" + n + "'");
}

void Report::add(std::string n, double value, std::string relation, double lo, double hi) {
  metrics.push_back({std::move(n), value, std::move(relation), lo, hi});
}

json Report::to_json() const {
  json j;
  j["case"] = name;
  j["pass"] = pass();
  j["dofs"] = dofs;
  j["alphas"] = alphas;
  j["runtime_s"] = seconds;
  json ms = json::array();
  for (const auto& m : metrics) {
    json e{{"name", m.name}, {"value", std::isfinite(m.value) ? json(m.value) : json(nullptr)}, {"relation", m.relation}};
    if (m.relation == "<=" || m.relation == "in") e["max"] = m.hi;
    if (m.relation == ">=" || m.relation == "in") e["min"] = m.lo;
    e["pass"] = m.pass();
    ms.push_back(e);
  }
  j["metrics"] = ms;
  return j;
}

double relative_l2(const std::vector<double>& s, const std::vector<double>& value, const std::vector<double>& exact) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    const double h = 0.5 * (s[i + 1] - s[i]);
    num += h * (std::pow(value[i] - exact[i], 2) + std::pow(value[i + 1] - exact[i + 1], 2));
    den += h * (exact[i] * exact[i] + exact[i + 1] * exact[i + 1]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

Run execute(const config::RunConfig& rc) {
  const auto t0 = std::chrono::steady_clock::now();
  Run r;
  r.config = rc;
  r.sys = std::make_unique<system::System>(rc.model);
  r.sol = r.sys->solve();
  for (const auto& line : rc.lines) r.tables.emplace_back(line.name, output::sample_line(*r.sys, r.sol, line));
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Report run_config(const json& j, const std::string& out_dir) {
  const config::RunConfig rc = config::parse(j);
  Run run = execute(rc);
  Report rep;
  rep.configs.emplace_back(rc.name, j);
  rep.name = rc.name;
  rep.dofs = run.sys->num_dofs();
  rep.alphas = run.sol.alphas;
  rep.seconds = run.seconds;
  rep.tables = run.tables;
  rep.add("residual", run.sol.residual);
  rep.add("inactive_functions", run.sys->num_inactive());
  rep.add("jump_energy", run.sys->jump_energy(run.sol));
  if (!out_dir.empty()) write_artifacts(out_dir, rep, &run);
  return rep;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// ---------------------------------------------------------------- configs

json material(double E, double nu, double thickness = 1.0, double width = 1.0) {
  return {{"E", E}, {"nu", nu}, {"thickness", thickness}, {"width", width}};
}

struct TimoCase {
  std::string name;
  bool spline = false;
  std::vector<int> solid_spans{40, 10};
  int beam_spans = 29;
  double nu = 0.3;
  json alpha = 4.7128e7;
  double lc = 24.0;          // solid length
  bool overlap = false;      // beam spans the whole length
};

const TimoshenkoBeam kBeam{};

json timo_config(const TimoCase& c) {
  const int p = c.spline ? 3 : 1;
  const std::string basis = c.spline ? "spline" : "lagrange";
  json solid{{"kind", "solid2d"}, {"basis", basis},    {"degree", {p}},
             {"spans", c.solid_spans}, {"lower", {0.0, -3.0}}, {"extent", {c.lc, 6.0}},
             {"material", material(kBeam.E, c.nu)}};
  const double b0 = c.overlap ? 0.0 : c.lc;
  json beam{{"theory", "timoshenko"}, {"basis", basis}, {"degree", {p}}, {"spans", {c.beam_spans}},
            {"lower", {b0}}, {"extent", {kBeam.L - b0}}, {"material", material(kBeam.E, c.nu, kBeam.D, 1.0)}};
  if (c.overlap) beam["overlap"] = {{"lower", {0.0}}, {"upper", {c.lc}}, {"n_cut", 10}, {"tau", 0.01}};
  json exact{{"timoshenko_exact", {{"E", kBeam.E}, {"nu", c.nu}, {"D", kBeam.D}, {"L", kBeam.L}, {"P", kBeam.P}}}};
  return {{"name", c.name},
          {"solid", solid},
          {"structures", {beam}},
          {"couplings", {{{"structure", 0}, {"alpha", c.alpha}, {"interfaces", {{{"point", {c.lc, 0.0}}, {"normal", {1.0, 0.0}}}}}}}},
          {"dirichlet", {{{"part", 0}, {"select", {{"side", {{"direction", 0}, {"side", 0}}}}}, {"components", {0, 1}}, {"value", exact}}}},
          {"loads", {{"point", {{{"part", 1}, {"x", {kBeam.L}}, {"force", {0.0, -kBeam.P, 0.0}}}}}}},
          {"output", {{"lines", {{{"name", "centerline"}, {"part", "auto"}, {"from", {0.0, 0.0}}, {"to", {kBeam.L, 0.0}}, {"n", 97}}}},
                      {"vtk", true}}}};
}

// Half portal frame: column on x = 0 clamped at y = 0, girder at y = H with a
// symmetry plane at x = S carrying half the midspan load.
struct Frame {
  double H = 12.0, S = 12.0, h = 1.0, a = 3.0;  // a: solid joint reach from the corner
  double E = 1e5, nu = 0.3, P = 1000.0;
  double cell = 0.1;
  int n(double len) const { return static_cast<int>(std::lround(len / cell)); }
};

json frame_config(const Frame& f, bool reference) {
  const double hh = 0.5 * f.h;
  auto block = [&](double x0, double y0, double w, double ht) {
    return json{{"lower", {x0, y0}}, {"extent", {w, ht}}, {"spans", {f.n(w), f.n(ht)}}};
  };
  json j{{"name", reference ? "frame-continuum" : "frame"}};
  if (reference) {
    j["solid"] = {{"kind", "solid2d"}, {"basis", "lagrange"}, {"degree", {1}},
                  {"blocks", {block(-hh, 0.0, f.h, f.H + hh), block(hh, f.H - hh, f.S - hh, f.h)}},
                  {"material", material(f.E, f.nu)}};
    j["dirichlet"] = {
        {{"part", 0}, {"select", {{"plane", {{"point", {0.0, 0.0}}, {"normal", {0.0, 1.0}}}}}}, {"components", {0, 1}}, {"value", "zero"}},
        {{"part", 0}, {"select", {{"plane", {{"point", {f.S, 0.0}}, {"normal", {1.0, 0.0}}}}}}, {"components", {0}}, {"value", "zero"}}};
    // half load as consistent nodal forces of a uniform shear on the symmetry face
    json pts = json::array();
    const int m = f.n(f.h);
    for (int i = 0; i <= m; ++i) {
      const double w = (i == 0 || i == m ? 0.5 : 1.0) / m;
      pts.push_back({{"part", 0}, {"x", {f.S, f.H - hh + f.h * i / m}}, {"force", {0.0, -0.5 * f.P * w}}});
    }
    j["loads"] = {{"point", pts}};
  } else {
    j["solid"] = {{"kind", "solid2d"}, {"basis", "lagrange"}, {"degree", {1}},
                  {"blocks", {block(-hh, f.H - f.a, f.h, f.a + hh), block(hh, f.H - hh, f.a - hh, f.h)}},
                  {"material", material(f.E, f.nu)}};
    const double len = f.H - f.a;
    j["structures"] = {
        {{"theory", "timoshenko"}, {"basis", "lagrange"}, {"degree", {1}}, {"spans", {f.n(len)}}, {"lower", {0.0}},
         {"extent", {len}}, {"placement", {{"origin", {0.0, 0.0}}, {"angle", M_PI / 2}}}, {"material", material(f.E, f.nu, f.h)}},
        {{"theory", "timoshenko"}, {"basis", "lagrange"}, {"degree", {1}}, {"spans", {f.n(f.S - f.a)}}, {"lower", {0.0}},
         {"extent", {f.S - f.a}}, {"placement", {{"origin", {f.a, f.H}}, {"angle", 0.0}}}, {"material", material(f.E, f.nu, f.h)}}};
    j["couplings"] = {{{"structure", 0}, {"alpha", 1e7}, {"interfaces", {{{"point", {0.0, len}}, {"normal", {0.0, -1.0}}}}}},
                      {{"structure", 1}, {"alpha", 1e7}, {"interfaces", {{{"point", {f.a, f.H}}, {"normal", {1.0, 0.0}}}}}}};
    j["dirichlet"] = {
        {{"part", 1}, {"select", {{"side", {{"direction", 0}, {"side", 0}}}}}, {"components", {0, 1, 2}}, {"value", "zero"}},
        {{"part", 2}, {"select", {{"side", {{"direction", 0}, {"side", 1}}}}}, {"components", {0, 2}}, {"value", "zero"}}};
    j["loads"] = {{"point", {{{"part", 2}, {"x", {f.S - f.a}}, {"force", {0.0, -0.5 * f.P, 0.0}}}}}};
  }
  j["output"] = {{"lines", {{{"name", "girder"}, {"part", "auto"}, {"from", {0.0, f.H}}, {"to", {f.S, f.H}}, {"n", 121}},
                            {{"name", "column"}, {"part", "auto"}, {"from", {0.0, 0.0}}, {"to", {0.0, f.H}}, {"n", 121}}}},
                 {"vtk", true}};
  return j;
}

// 3D cantilever: length 320, width 20, thickness 20, end shear 10 per unit width.
struct PlateCase {
  std::string theory = "mindlin";
  enum Kind { Conforming, Nonconforming, Reference } kind = Conforming;
};

constexpr double kPL = 320.0, kPW = 20.0, kPT = 20.0, kPE = 1000.0, kPnu = 0.3;

json plate_config(const PlateCase& c) {
  const double lc = c.kind == PlateCase::Nonconforming ? 175.0 : c.kind == PlateCase::Reference ? kPL : kPL / 2;
  const int nx = c.kind == PlateCase::Nonconforming ? 35 : c.kind == PlateCase::Reference ? 64 : 32;
  json solid{{"kind", "solid3d"}, {"basis", "spline"}, {"degree", {3}}, {"spans", {nx, 4, 5}},
             {"lower", {0.0, 0.0, -kPT / 2}}, {"extent", {lc, kPW, kPT}}, {"material", material(kPE, kPnu)}};
  json j{{"solid", solid},
         {"dirichlet", {{{"part", 0}, {"select", {{"side", {{"direction", 0}, {"side", 0}}}}}, {"components", {0, 1, 2}}, {"value", "zero"}}}}};
  if (c.kind == PlateCase::Reference) {
    j = json{{"name", "plate-reference-3d"}, {"solid", solid}, {"dirichlet", j["dirichlet"]}};
    j["loads"] = {{"traction", {{{"direction", 0}, {"side", 1}, {"value", {{"constant", {0.0, 0.0, -10.0 / kPT}}}}}}}};
    j["output"] = {{"lines", {{{"name", "axis"}, {"part", 0}, {"from", {0.0, kPW / 2, 0.0}}, {"to", {kPL, kPW / 2, 0.0}}, {"n", 161}}}}};
    return j;
  }
  const bool nc = c.kind == PlateCase::Nonconforming;
  json plate{{"theory", c.theory}, {"basis", "spline"}, {"degree", {3}}, {"spans", {nc ? 32 : 16, 2}},
             {"lower", {nc ? 0.0 : lc, 0.0}}, {"extent", {nc ? kPL : kPL - lc, kPW}},
             {"placement", {{"mid_surface", 0.0}}}, {"material", material(kPE, kPnu, kPT)}};
  if (nc) plate["overlap"] = {{"lower", {-1.0, -1.0}}, {"upper", {lc, kPW + 1.0}}, {"n_cut", 10}, {"tau", 0.01}};
  json out{{"name", (nc ? "plate-nonconforming-175-" : "plate-conforming-") + c.theory}};
  out["solid"] = solid;
  out["structures"] = {plate};
  out["couplings"] = {{{"structure", 0}, {"alpha", 5e3}, {"interfaces", {{{"point", {lc, 0.0, 0.0}}, {"normal", {1.0, 0.0, 0.0}}}}}}};
  out["dirichlet"] = j["dirichlet"];
  out["loads"] = {{"edge", {{{"part", 1}, {"direction", 0}, {"side", 1}, {"q", -10.0}}}}};
  out["output"] = {{"lines", {{{"name", "axis"}, {"part", "auto"}, {"from", {0.0, kPW / 2, 0.0}}, {"to", {kPL, kPW / 2, 0.0}}, {"n", 161}}}},
                   {"vtk", true}};
  return out;
}

// Clamped square plate with an embedded solid block.
json square_config(double shift, bool pure_plate) {
  const double L = 400.0, t = 20.0, Ls = 100.0, p = 10.0, E = 1e3, nu = 0.3;
  const double x0 = 150.0 + shift, y0 = 150.0;
  json plate{{"theory", "kirchhoff"}, {"basis", "spline"}, {"degree", {3}}, {"spans", {20, 20}}, {"lower", {0.0, 0.0}},
             {"extent", {L, L}}, {"placement", {{"mid_surface", 0.0}}}, {"material", material(E, nu, t)}};
  json clamp = json::array();
  for (int d = 0; d < 2; ++d)
    for (int s = 0; s < 2; ++s)
      clamp.push_back({{"part", 1},
                       {"select", {{"side", {{"direction", d}, {"side", s}, {"rows", 2}}}}},
                       {"components", {0}},
                       {"value", "zero"}});
  json j;
  if (pure_plate) {
    j = {{"name", "square-plate-pure"},
         {"structures", {plate}},
         {"dirichlet", clamp},
         {"loads", {{"distributed", {{{"part", 1}, {"q", -p}}}}}},
         {"output", {{"lines", {{{"name", "midline"}, {"part", 1}, {"from", {0.0, L / 2, 0.0}}, {"to", {L, L / 2, 0.0}}, {"n", 201}}}}}}};
    return j;
  }
  plate["overlap"] = {{"lower", {x0, y0}}, {"upper", {x0 + Ls, y0 + Ls}}, {"n_cut", 10}, {"tau", 0.01}};
  const double xm = x0 + Ls / 2, ym = y0 + Ls / 2;
  j = {{"name", shift == 0.0 ? "square-plate-embedded" : "square-plate-embedded-shifted"},
       {"solid",
        {{"kind", "solid3d"}, {"basis", "spline"}, {"degree", {3}}, {"spans", {4, 4, 2}}, {"lower", {x0, y0, -t / 2}},
         {"extent", {Ls, Ls, t}}, {"material", material(E, nu)}}},
       {"structures", {plate}},
       {"couplings",
        {{{"structure", 0},
          {"alpha", 1e6},
          {"interfaces",
           {{{"point", {x0, ym, 0.0}}, {"normal", {-1.0, 0.0, 0.0}}},
            {{"point", {x0 + Ls, ym, 0.0}}, {"normal", {1.0, 0.0, 0.0}}},
            {{"point", {xm, y0, 0.0}}, {"normal", {0.0, -1.0, 0.0}}},
            {{"point", {xm, y0 + Ls, 0.0}}, {"normal", {0.0, 1.0, 0.0}}}}}}}},
       {"dirichlet", clamp},
       {"loads", {{"distributed", {{{"part", 1}, {"q", -p}}}}, {"body", {{{"b", {0.0, 0.0, -p / t}}}}}}},
       {"output", {{"lines", {{{"name", "midline"}, {"part", "auto"}, {"from", {0.0, L / 2, 0.0}}, {"to", {L, L / 2, 0.0}}, {"n", 201}}}},
                   {"vtk", true}}}};
  return j;
}

// ---------------------------------------------------------------- helpers

std::vector<double> column(const output::Table& t, const std::string& name) {
  for (size_t c = 0; c < t.header.size(); ++c) {
    if (t.header[c] != name) continue;
    std::vector<double> v;
    for (const auto& r : t.rows) v.push_back(r[c]);
    return v;
  }
  throw Error(ErrorKind::Internal, "no column " + name);
}

const output::Table& table(const Run& r, const std::string& name) {
  for (const auto& [n, t] : r.tables)
    if (n == name) return t;
  throw Error(ErrorKind::Internal, "no table " + name);
}

VectorXd pt(std::initializer_list<double> v) {
  VectorXd x(static_cast<int>(v.size()));
  int i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

Run run_json(const json& j) { return execute(config::parse(j)); }

// eps * || |K| |a| || / ||K a||: the smallest residual a double-precision
// solution vector can show on this system.
double rounding_floor(const system::System& sys, const system::Solution& sol) {
  const mixdim::SparseMatrix K = sys.reduce(sys.matrix(sol.alphas));
  const auto& free = sys.free_dofs();
  VectorXd x(static_cast<int>(free.size()));
  for (size_t k = 0; k < free.size(); ++k) x[static_cast<int>(k)] = sol.a[free[k]];
  const mixdim::SparseMatrix A = K.cwiseAbs();
  const double kx = (K * x).norm();
  return kx > 0.0 ? std::numeric_limits<double>::epsilon() * (A * x.cwiseAbs()).norm() / kx : 0.0;
}

void base_metrics(Report& rep, const Run& run) {
  rep.dofs = run.sys->num_dofs();
  rep.alphas = run.sol.alphas;
  rep.tables.insert(rep.tables.end(), run.tables.begin(), run.tables.end());
  rep.add("residual", run.sol.residual);
  rep.add("residual_rounding_floor", rounding_floor(*run.sys, run.sol));
}

// Cantilever errors against the closed form for a solved model with solid on [0, lc].
struct TimoErrors {
  double tip, tip_err, centerline_err, grid_err, reaction_err;
};

TimoErrors timo_errors(const Run& run, const TimoshenkoBeam& tb, double lc) {
  TimoErrors e{};
  e.tip = run.sys->recover(run.sol, 1, pt({tb.L, 0.0})).u[1];
  e.tip_err = rel(e.tip, tb.displacement(tb.L, 0.0)[1]);
  const auto& cl = table(run, "centerline");
  const auto s = column(cl, "s"), uy = column(cl, "uy");
  std::vector<double> ex;
  for (double x : s) ex.push_back(tb.displacement(x, 0.0)[1]);
  e.centerline_err = relative_l2(s, uy, ex);
  // 21 x 7 grid over the solid, trapezoidal weights
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= 20; ++i)
    for (int k = 0; k <= 6; ++k) {
      const double w = (i == 0 || i == 20 ? 0.5 : 1.0) * (k == 0 || k == 6 ? 0.5 : 1.0);
      const VectorXd x = pt({lc * i / 20.0, -3.0 + k});
      const VectorXd u = run.sys->recover(run.sol, 0, x).u;
      const Eigen::Vector2d ue = tb.displacement(x[0], x[1]);
      num += w * (u - ue).squaredNorm();
      den += w * ue.squaredNorm();
    }
  e.grid_err = std::sqrt(num / den);
  double ry = 0.0;
  const auto& m = run.sys->part_mesh(0);
  for (int a = 0; a < m.num_nodes(); ++a) ry += run.sol.reactions[run.sys->dof(0, a, 1)];
  e.reaction_err = rel(ry, tb.P);
  return e;
}

double stress_line_error(const Run& run, const TimoshenkoBeam& tb, double x, int comp, int n = 61) {
  std::vector<double> s, v, ex;
  for (int i = 0; i < n; ++i) {
    const double y = -3.0 + 6.0 * i / (n - 1);
    s.push_back(y);
    v.push_back(run.sys->recover(run.sol, 0, pt({x, y})).sigma[comp]);
    ex.push_back(tb.stress(x, y)[comp]);
  }
  return relative_l2(s, v, ex);
}

output::Table stress_table(const Run& run, const TimoshenkoBeam& tb, double x, int n = 61) {
  output::Table t;
  t.header = {"y", "sxx", "sxy", "sxx_exact", "sxy_exact"};
  for (int i = 0; i < n; ++i) {
    const double y = -3.0 + 6.0 * i / (n - 1);
    const VectorXd s = run.sys->recover(run.sol, 0, pt({x, y})).sigma;
    const Eigen::Vector3d se = tb.stress(x, y);
    t.rows.push_back({y, s[0], s[2], se[0], se[2]});
  }
  return t;
}

// ---------------------------------------------------------------- cases

TimoCase q4_case(const std::string& name, json alpha) {
  TimoCase c;
  c.name = name;
  c.alpha = std::move(alpha);
  return c;
}

TimoCase spline_case(double nu, std::vector<int> solid_spans = {16, 4}, int beam_spans = 4) {
  TimoCase c;
  c.name = nu == 0.3 ? "timo-spline-conforming" : "timo-spline-conforming-nu0";
  c.spline = true;
  c.solid_spans = std::move(solid_spans);
  c.beam_spans = beam_spans;
  c.nu = nu;
  c.alpha = 5.5e9;
  return c;
}

TimoCase nonconforming_case(bool reference) {
  TimoCase c;
  c.name = reference ? "timo-nonconforming-reference" : "timo-nonconforming-29.97";
  c.spline = true;
  c.solid_spans = {32, 4};
  c.lc = 29.97;
  c.alpha = "auto";
  c.overlap = !reference;
  c.beam_spans = reference ? 3 : 8;
  return c;
}

Report case_timo_q4(const TimoCase& c, Run& primary) {
  Report rep;
  primary = run_json(timo_config(c));
  base_metrics(rep, primary);
  const auto e = timo_errors(primary, kBeam, c.lc);
  rep.add("dofs", rep.dofs, "in", 992, 992);
  rep.add("tip_uy", e.tip);
  rep.add("tip_uy_exact", kBeam.displacement(kBeam.L, 0.0)[1]);
  rep.add("tip_rel_error", e.tip_err, "<=", 0.0, 0.015);
  rep.add("centerline_uy_l2_error", e.centerline_err, "<=", 0.0, 0.02);
  rep.add("solid_grid_u_l2_error", e.grid_err);
  rep.add("reaction_balance_error", e.reaction_err, "<=", 0.0, 1e-8);
  rep.add("sigma_xx_at_12_2", primary.sys->recover(primary.sol, 0, pt({12.0, 2.0})).sigma[0]);
  rep.add("runtime_s", primary.seconds, "<=", 0.0, 5.0);
  return rep;
}

Report case_timo_alpha(Run& primary) {
  const auto t0 = Clock::now();
  Report rep;
  const auto rc = config::parse(timo_config(q4_case("timo-q4-alpha", "auto")));
  primary.config = rc;
  primary.sys = std::make_unique<system::System>(rc.model);
  const auto est = primary.sys->estimate(0);
  rep.add("alpha", est.alpha, "in", 2.4e7, 9.4e7);
  rep.add("lambda1", est.lambda1);
  rep.add("eigen_iterations", est.iterations);
  rep.add("positive_definite_at_alpha", primary.sys->positive_definite({est.alpha}) ? 1.0 : 0.0, ">=", 1.0);
  rep.add("indefinite_at_alpha_over_100", primary.sys->positive_definite({est.alpha / 100.0}) ? 0.0 : 1.0, ">=", 1.0);
  primary.sol = primary.sys->solve({est.alpha});
  for (const auto& line : rc.lines) primary.tables.emplace_back(line.name, output::sample_line(*primary.sys, primary.sol, line));
  base_metrics(rep, primary);
  const auto e = timo_errors(primary, kBeam, 24.0);
  rep.add("tip_rel_error", e.tip_err);
  rep.add("runtime_s", since(t0), "<=", 0.0, 30.0);
  return rep;
}

Report case_timo_spline(Run& primary) {
  const auto t0 = Clock::now();
  Report rep;
  primary = run_json(timo_config(spline_case(0.3)));
  base_metrics(rep, primary);
  const auto e = timo_errors(primary, kBeam, 24.0);
  rep.add("tip_uy", e.tip);
  rep.add("tip_rel_error", e.tip_err, "<=", 0.0, 0.015);
  rep.add("centerline_uy_l2_error", e.centerline_err, "<=", 0.0, 0.02);
  rep.add("solid_grid_u_l2_error", e.grid_err);
  rep.add("reaction_balance_error", e.reaction_err, "<=", 0.0, 1e-8);
  rep.add("sigma_xx_x12_l2_error", stress_line_error(primary, kBeam, 12.0, 0), "<=", 0.0, 0.03);
  rep.tables.emplace_back("stress_x12", stress_table(primary, kBeam, 12.0));
  rep.tables.emplace_back("stress_interface", stress_table(primary, kBeam, 24.0));

  // shear stress at the interface line: nu = 0 against nu = 0.3
  const double mis03 = stress_line_error(primary, kBeam, 24.0, 2);
  TimoshenkoBeam tb0 = kBeam;
  tb0.nu = 0.0;
  const auto c0 = spline_case(0.0);
  const json j0 = timo_config(c0);
  rep.configs.emplace_back(c0.name, j0);
  Run r0 = run_json(j0);
  const double mis0 = stress_line_error(r0, tb0, 24.0, 2);
  rep.add("sigma_xy_interface_mismatch_nu03", mis03);
  rep.add("sigma_xy_interface_mismatch_nu0", mis0);
  rep.add("sigma_xy_mismatch_nu0_below_nu03", mis0 < mis03 ? 1.0 : 0.0, ">=", 1.0);
  rep.add("tip_rel_error_nu0", timo_errors(r0, tb0, 24.0).tip_err);

  // knot-span subdivision 4x1 -> 8x2 -> 16x4: solid grid error must drop at every level
  std::vector<double> errs;
  for (int level = 0; level < 3; ++level) {
    const int k = 1 << level;
    auto c = spline_case(0.3, {4 * k, k}, k);
    c.name = "timo-spline-level" + std::to_string(level);
    Run r = run_json(timo_config(c));
    errs.push_back(timo_errors(r, kBeam, 24.0).grid_err);
    rep.add("refinement_l2_error_level" + std::to_string(level), errs.back());
  }
  bool mono = true;
  for (size_t i = 1; i < errs.size(); ++i) mono = mono && errs[i] < errs[i - 1];
  rep.add("refinement_monotone", mono ? 1.0 : 0.0, ">=", 1.0);
  rep.add("runtime_s", since(t0));
  return rep;
}

Report case_timo_nonconforming(Run& primary) {
  const auto t0 = Clock::now();
  Report rep;
  primary = run_json(timo_config(nonconforming_case(false)));
  base_metrics(rep, primary);
  const auto c = nonconforming_case(true);
  const json jr = timo_config(c);
  rep.configs.emplace_back(c.name, jr);
  Run ref = run_json(jr);
  const double tip = primary.sys->recover(primary.sol, 1, pt({kBeam.L, 0.0})).u[1];
  const double tip_ref = ref.sys->recover(ref.sol, 1, pt({kBeam.L, 0.0})).u[1];
  rep.add("tip_uy", tip);
  rep.add("tip_uy_conforming", tip_ref);
  rep.add("tip_rel_diff_vs_conforming", rel(tip, tip_ref), "<=", 0.0, 0.01);
  rep.add("tip_rel_error_exact", rel(tip, kBeam.displacement(kBeam.L, 0.0)[1]));
  rep.add("inactive_functions", primary.sys->num_inactive());
  int cut = 0, voids = 0;
  for (auto l : primary.sys->labels(0)) {
    cut += l == nonconforming::Label::Cut;
    voids += l == nonconforming::Label::Void;
  }
  rep.add("cut_elements", cut);
  rep.add("void_elements", voids);
  rep.add("runtime_s", since(t0));
  return rep;
}

Report case_frame(Run& primary) {
  const auto t0 = Clock::now();
  Report rep;
  const Frame f;
  primary = run_json(frame_config(f, false));
  base_metrics(rep, primary);
  const json jr = frame_config(f, true);
  rep.configs.emplace_back("frame-continuum", jr);
  Run ref = run_json(jr);
  const VectorXd mid = pt({f.S, f.H}), col = pt({0.0, 0.5 * (f.H - f.a)});
  const double v = primary.sys->recover(primary.sol, 2, mid).u[1];
  const double v_ref = ref.sys->recover(ref.sol, 0, mid).u[1];
  rep.add("midspan_uy", v);
  rep.add("midspan_uy_continuum", v_ref);
  rep.add("midspan_rel_diff", rel(v, v_ref), "<=", 0.0, 0.05);
  const double ux = primary.sys->recover(primary.sol, 1, col).u[0];
  const double ux_ref = ref.sys->recover(ref.sol, 0, col).u[0];
  rep.add("column_mid_ux", ux);
  rep.add("column_mid_ux_continuum", ux_ref);
  rep.add("column_mid_rel_diff", rel(ux, ux_ref), "<=", 0.0, 0.05);
  for (int c = 0; c < 2; ++c) {
    const auto est = primary.sys->estimate(c);
    rep.add("alpha_estimate_" + std::to_string(c), est.alpha);
    rep.add("alpha_fixed_over_estimate_" + std::to_string(c), 1e7 / est.alpha, ">=", 1.0);
  }
  rep.add("continuum_dofs", ref.sys->num_dofs());
  rep.add("runtime_s", since(t0));
  return rep;
}

// The 3D reference is shared by several cases within one process.
double plate_reference_tip(Report& rep) {
  static std::map<std::string, double> cache;
  const json jr = plate_config({"", PlateCase::Reference});
  rep.configs.emplace_back("plate-reference-3d", jr);
  const std::string key = jr.dump();
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  Run ref = run_json(jr);
  const double tip = ref.sys->recover(ref.sol, 0, pt({kPL, kPW / 2, 0.0})).u[2];
  cache[key] = tip;
  return tip;
}

Report case_plate(const PlateCase& c, Run& primary) {
  const auto t0 = Clock::now();
  Report rep;
  primary = run_json(plate_config(c));
  base_metrics(rep, primary);
  const double tip = primary.sys->recover(primary.sol, 1, pt({kPL, kPW / 2, 0.0})).u[2];
  const double tip_ref = plate_reference_tip(rep);
  rep.add("tip_uz", tip);
  rep.add("tip_uz_reference", tip_ref);
  rep.add("tip_rel_diff", rel(tip, tip_ref), "<=", 0.0, 0.05);
  rep.add("mda_runtime_s", primary.seconds);
  rep.add("runtime_s", since(t0), "<=", 0.0, 120.0);
  return rep;
}

Report case_square(Run& primary) {
  const auto t0 = Clock::now();
  Report rep;
  primary = run_json(square_config(0.0, false));
  base_metrics(rep, primary);
  const json jp = square_config(0.0, true);
  rep.configs.emplace_back("square-plate-pure", jp);
  Run pure = run_json(jp);
  const double w = primary.sys->recover(primary.sol, 0, pt({200.0, 200.0, 0.0})).u[2];
  const double w_ref = pure.sys->recover(pure.sol, 1, pt({200.0, 200.0, 0.0})).u[2];
  rep.add("center_uz", w);
  rep.add("center_uz_pure_plate", w_ref);
  rep.add("center_rel_diff", rel(w, w_ref), "<=", 0.0, 0.03);
  rep.add("inactive_functions", primary.sys->num_inactive());

  // same plate mesh, solid moved by +20 in x: only the classification changes
  const json js = square_config(20.0, false);
  rep.configs.emplace_back("square-plate-embedded-shifted", js);
  Run shifted = run_json(js);
  const auto& pm = primary.sys->part_mesh(1);
  const auto& sm = shifted.sys->part_mesh(1);
  const bool same_mesh = pm.num_elements() == sm.num_elements() && pm.nodes().isApprox(sm.nodes());
  int changed = 0;
  for (size_t e = 0; e < primary.sys->labels(0).size(); ++e) changed += primary.sys->labels(0)[e] != shifted.sys->labels(0)[e];
  const double ws = shifted.sys->recover(shifted.sol, 0, pt({220.0, 200.0, 0.0})).u[2];
  const double ws_ref = pure.sys->recover(pure.sol, 1, pt({220.0, 200.0, 0.0})).u[2];
  rep.add("shifted_completed", std::isfinite(ws) ? 1.0 : 0.0, ">=", 1.0);
  rep.add("shifted_same_plate_mesh", same_mesh ? 1.0 : 0.0, ">=", 1.0);
  rep.add("shifted_relabelled_elements", changed);
  rep.add("shifted_uz_at_220_200", ws);
  rep.add("shifted_rel_diff_pure_plate", rel(ws, ws_ref));
  rep.add("runtime_s", since(t0));
  return rep;
}

struct CaseDef {
  std::string name;
  std::function<json()> config;
  std::function<Report(Run&)> run;
};

const std::vector<CaseDef>& registry() {
  static const std::vector<CaseDef> cases = {
      {"timo-q4-conforming", [] { return timo_config(q4_case("timo-q4-conforming", 4.7128e7)); },
       [](Run& r) { return case_timo_q4(q4_case("timo-q4-conforming", 4.7128e7), r); }},
      {"timo-q4-alpha", [] { return timo_config(q4_case("timo-q4-alpha", "auto")); }, case_timo_alpha},
      {"timo-spline-conforming", [] { return timo_config(spline_case(0.3)); }, case_timo_spline},
      {"timo-nonconforming-29.97", [] { return timo_config(nonconforming_case(false)); }, case_timo_nonconforming},
      {"frame", [] { return frame_config(Frame{}, false); }, case_frame},
      {"plate-conforming-mindlin", [] { return plate_config({"mindlin", PlateCase::Conforming}); },
       [](Run& r) { return case_plate({"mindlin", PlateCase::Conforming}, r); }},
      {"plate-conforming-kirchhoff", [] { return plate_config({"kirchhoff", PlateCase::Conforming}); },
       [](Run& r) { return case_plate({"kirchhoff", PlateCase::Conforming}, r); }},
      {"plate-nonconforming-175", [] { return plate_config({"mindlin", PlateCase::Nonconforming}); },
       [](Run& r) { return case_plate({"mindlin", PlateCase::Nonconforming}, r); }},
      {"square-plate-embedded", [] { return square_config(0.0, false); }, case_square},
  };
  return cases;
}

const CaseDef& find(const std::string& name) {
  for (const auto& c : registry())
    if (c.name == name) return c;
  throw Error(ErrorKind::Config, "unknown bench case '" + name + "'");
}

}  // namespace

const std::vector<std::string>& case_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& c : registry()) n.push_back(c.name);
    return n;
  }();
  return names;
}

bool has_case(const std::string& name) {
  for (const auto& c : registry())
    if (c.name == name) return true;
  return false;
}

json case_config(const std::string& name) { return find(name).config(); }

Report run_case(const std::string& name, const std::string& out_dir) {
  const CaseDef& def = find(name);
  const auto t0 = Clock::now();
  Run primary;
  Report rep = def.run(primary);
  rep.name = name;
  rep.configs.insert(rep.configs.begin(), {name, def.config()});
  rep.seconds = since(t0);
  if (!out_dir.empty()) write_artifacts(out_dir, rep, &primary);
  return rep;
}

void write_artifacts(const std::string& dir, const Report& r, const Run* run) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create '" + dir + "': " + ec.message());
  const fs::path base(dir);
  auto write_text = [](const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + p.string() + "'");
    out << s << '\n';
  };
  write_text(base / (r.name + ".report.json"), r.to_json().dump(2));
  for (const auto& [n, t] : r.tables) output::write_csv((base / (r.name + "." + n + ".csv")).string(), t);
  for (size_t i = 0; i < r.configs.size(); ++i) {
    const auto& [n, j] = r.configs[i];
    const std::string file = i == 0 ? r.name + ".config.json" : r.name + "." + n + ".config.json";
    write_text(base / file, j.dump(2));
  }
  if (run && run->sys && run->config.vtk) output::write_vtk((base / (r.name + ".vtk")).string(), *run->sys, run->sol);
}

}  // namespace mixdim::bench
