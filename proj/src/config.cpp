#include "mixdim/config.hpp"

#include <fstream>
#include <set>

#include "mixdim/errors.hpp"

namespace mixdim::config {

using mesh::BasisKind;
using mesh::Mesh;
using mesh::ModelKind;

Eigen::Vector2d TimoshenkoBeam::displacement(double x, double y) const {
  const double c = P / (6.0 * E * I());
  return {c * y * ((6.0 * L - 3.0 * x) * x + (2.0 + nu) * (y * y - D * D / 4.0)),
          -c * (3.0 * nu * y * y * (L - x) + (4.0 + 5.0 * nu) * D * D * x / 4.0 + (3.0 * L - x) * x * x)};
}

Eigen::Vector3d TimoshenkoBeam::stress(double x, double y) const {
  return {P * (L - x) * y / I(), 0.0, -P / (2.0 * I()) * (D * D / 4.0 - y * y)};
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::Config, "'" + path + "': " + msg);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string join(const std::string& path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Object accessor that remembers which keys were read and rejects the rest.
class Obj {
 public:
  Obj(const json& j, std::string path, std::initializer_list<const char*> allowed) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || it.key() == a;
      if (!ok) fail(join(path_, it.key()), "unknown key");
    }
  }
  bool has(const std::string& k) const { return j_.contains(k); }
  const json& at(const std::string& k) {
    if (!j_.contains(k)) fail(join(path_, k), "missing required key");
    used_.insert(k);
    return j_.at(k);
  }
  const json* opt(const std::string& k) {
    if (!j_.contains(k)) return nullptr;
    used_.insert(k);
    return &j_.at(k);
  }
  std::string path(const std::string& k) const { return join(path_, k); }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) fail(join(path_, it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

double num(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string str(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

const json& arr(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

Eigen::VectorXd vec(const json& j, const std::string& path) {
  arr(j, path);
  Eigen::VectorXd v(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = num(j[i], join(path, i));
  return v;
}

std::vector<int> ints(const json& j, const std::string& path) {
  arr(j, path);
  std::vector<int> v;
  for (size_t i = 0; i < j.size(); ++i) v.push_back(integer(j[i], join(path, i)));
  return v;
}

std::vector<double> dbls(const json& j, const std::string& path) {
  const auto v = vec(j, path);
  return {v.data(), v.data() + v.size()};
}

elasticity::Material material(const json& j, const std::string& path) {
  Obj o(j, path, {"E", "nu", "k_shear", "thickness", "width"});
  elasticity::Material m;
  m.E = num(o.at("E"), o.path("E"));
  m.nu = num(o.at("nu"), o.path("nu"));
  if (auto* p = o.opt("k_shear")) m.k_shear = num(*p, o.path("k_shear"));
  if (auto* p = o.opt("thickness")) m.thickness = num(*p, o.path("thickness"));
  if (auto* p = o.opt("width")) m.width = num(*p, o.path("width"));
  o.finish();
  try {
    m.validate();
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return m;
}

ModelKind model_kind(const std::string& s, const std::string& path) {
  if (s == "solid2d") return ModelKind::Solid2D;
  if (s == "solid3d") return ModelKind::Solid3D;
  if (s == "beam") return ModelKind::Beam;
  if (s == "plate") return ModelKind::Plate;
  fail(path, "unknown mesh kind '" + s + "'");
}

BasisKind basis_kind(const std::string& s, const std::string& path) {
  if (s == "lagrange") return BasisKind::Lagrange;
  if (s == "spline") return BasisKind::Spline;
  fail(path, "unknown basis '" + s + "'");
}

// Mesh construction errors are reported against the block's key path.
Mesh checked_build(const std::string& path, ModelKind kind, BasisKind basis, const std::vector<int>& degree,
                   const std::vector<int>& spans, const std::vector<double>& lower, const std::vector<double>& extent) {
  try {
    return Mesh::build(kind, basis, degree, spans, lower, extent);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Config && e.kind() != ErrorKind::Domain) throw;
    std::string w = e.what();
    if (const auto k = w.find(" error: "); k != std::string::npos) w = w.substr(k + 8);
    fail(path, w);
  }
}

// Mesh keys shared by the solid and structure blocks.
Mesh mesh_block(Obj& o, ModelKind kind) {
  const BasisKind basis = basis_kind(str(o.at("basis"), o.path("basis")), o.path("basis"));
  const auto degree = ints(o.at("degree"), o.path("degree"));
  if (const json* blocks = o.opt("blocks")) {
    // union of Lagrange boxes (L-shaped frame joints)
    arr(*blocks, o.path("blocks"));
    if (blocks->empty()) fail(o.path("blocks"), "needs at least one box");
    if (basis != BasisKind::Lagrange) fail(o.path("blocks"), "box unions need the lagrange basis");
    Mesh m;
    for (size_t i = 0; i < blocks->size(); ++i) {
      const std::string p = join(o.path("blocks"), i);
      Obj b((*blocks)[i], p, {"spans", "lower", "extent"});
      Mesh part = checked_build(p, kind, basis, degree, ints(b.at("spans"), b.path("spans")),
                                dbls(b.at("lower"), b.path("lower")), dbls(b.at("extent"), b.path("extent")));
      b.finish();
      m = i == 0 ? std::move(part) : Mesh::merge(m, part);
    }
    return m;
  }
  return checked_build(o.path("spans"), kind, basis, degree, ints(o.at("spans"), o.path("spans")),
                       dbls(o.at("lower"), o.path("lower")), dbls(o.at("extent"), o.path("extent")));
}

system::Field field(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (str(j, path) == "zero") return {};
    fail(path, "unknown value '" + j.get<std::string>() + "'");
  }
  Obj o(j, path, {"constant", "affine", "timoshenko_exact", "timoshenko_traction"});
  system::Field f;
  if (auto* p = o.opt("constant")) {
    const Eigen::VectorXd c = vec(*p, o.path("constant"));
    f = [c](const Eigen::VectorXd&) { return c; };
  } else if (auto* p = o.opt("affine")) {
    Obj a(*p, o.path("affine"), {"c", "G"});
    const Eigen::VectorXd c = vec(a.at("c"), a.path("c"));
    const json& G = arr(a.at("G"), a.path("G"));
    Eigen::MatrixXd M(c.size(), G.empty() ? 0 : static_cast<int>(G[0].size()));
    if (static_cast<int>(G.size()) != c.size()) fail(a.path("G"), "needs one row per component");
    for (size_t i = 0; i < G.size(); ++i) {
      const auto row = vec(G[i], join(a.path("G"), i));
      if (row.size() != M.cols()) fail(join(a.path("G"), i), "ragged matrix");
      M.row(static_cast<int>(i)) = row.transpose();
    }
    a.finish();
    f = [c, M](const Eigen::VectorXd& x) {
      if (x.size() != M.cols()) throw Error(ErrorKind::Config, "affine value applied in the wrong dimension");
      return Eigen::VectorXd(c + M * x);
    };
  } else if (const json* p = o.opt("timoshenko_exact"); p || o.has("timoshenko_traction")) {
    const bool traction = p == nullptr;
    const std::string key = traction ? "timoshenko_traction" : "timoshenko_exact";
    if (traction) p = o.opt(key);
    Obj b(*p, o.path(key), {"E", "nu", "D", "L", "P"});
    TimoshenkoBeam tb;
    for (auto [k, dst] : {std::pair<const char*, double*>{"E", &tb.E}, {"nu", &tb.nu}, {"D", &tb.D}, {"L", &tb.L},
                          {"P", &tb.P}}) {
      if (auto* v = b.opt(k)) *dst = num(*v, b.path(k));
    }
    b.finish();
    if (traction) {
      f = [tb](const Eigen::VectorXd& x) {
        Eigen::VectorXd t(2);
        t << 0.0, tb.stress(x[0], x[1])[2];
        return t;
      };
    } else {
      f = [tb](const Eigen::VectorXd& x) { return Eigen::VectorXd(tb.displacement(x[0], x[1])); };
    }
  } else {
    fail(path, "expected one of zero, constant, affine, timoshenko_exact, timoshenko_traction");
  }
  o.finish();
  return f;
}

system::Selection selection(const json& j, const std::string& path) {
  system::Selection s;
  if (j.is_string()) {
    if (j.get<std::string>() != "all") fail(path, "expected \"all\" or an object");
    s.kind = system::Selection::Kind::All;
    return s;
  }
  Obj o(j, path, {"side", "plane"});
  if (auto* p = o.opt("side")) {
    Obj b(*p, o.path("side"), {"direction", "side", "rows"});
    s.kind = system::Selection::Kind::Side;
    s.direction = integer(b.at("direction"), b.path("direction"));
    s.side = integer(b.at("side"), b.path("side"));
    if (auto* r = b.opt("rows")) s.rows = integer(*r, b.path("rows"));
    if (s.side != 0 && s.side != 1) fail(b.path("side"), "must be 0 or 1");
    b.finish();
  } else if (auto* p = o.opt("plane")) {
    Obj b(*p, o.path("plane"), {"point", "normal", "tol"});
    s.kind = system::Selection::Kind::Plane;
    s.point = vec(b.at("point"), b.path("point"));
    s.normal = vec(b.at("normal"), b.path("normal"));
    if (auto* t = b.opt("tol")) s.tol = num(*t, b.path("tol"));
    b.finish();
  } else {
    fail(path, "expected side or plane");
  }
  o.finish();
  return s;
}

}  // namespace

RunConfig parse(const json& j) {
  RunConfig rc;
  Obj root(j, "", {"name", "solid", "structures", "couplings", "dirichlet", "loads", "output"});
  rc.name = str(root.at("name"), "name");
  auto& model = rc.model;

  if (const json* s = root.opt("solid")) {
    Obj o(*s, "solid", {"kind", "basis", "degree", "spans", "lower", "extent", "blocks", "material"});
    const ModelKind kind = model_kind(str(o.at("kind"), o.path("kind")), o.path("kind"));
    if (kind != ModelKind::Solid2D && kind != ModelKind::Solid3D) fail(o.path("kind"), "solid must be solid2d or solid3d");
    model.solid.mesh = mesh_block(o, kind);
    model.solid.material = material(o.at("material"), o.path("material"));
    o.finish();
  } else {
    model.has_solid = false;
  }

  if (const json* ss = root.opt("structures")) {
    arr(*ss, "structures");
    for (size_t i = 0; i < ss->size(); ++i) {
      const std::string p = join("structures", i);
      Obj o((*ss)[i], p, {"theory", "basis", "degree", "spans", "lower", "extent", "blocks", "material", "placement", "overlap"});
      system::StructurePart sp;
      try {
        sp.theory = structural::theory_from_string(str(o.at("theory"), o.path("theory")));
      } catch (const Error& e) {
        fail(o.path("theory"), e.what());
      }
      const ModelKind kind = structural::is_beam(sp.theory) ? ModelKind::Beam : ModelKind::Plate;
      sp.mesh = mesh_block(o, kind);
      sp.material = material(o.at("material"), o.path("material"));
      if (auto* pl = o.opt("placement")) {
        Obj b(*pl, o.path("placement"), {"origin", "angle", "mid_surface"});
        if (auto* v = b.opt("origin")) {
          const auto x = vec(*v, b.path("origin"));
          if (x.size() != 2) fail(b.path("origin"), "needs two coordinates");
          sp.mesh.placement.origin = x;
        }
        if (auto* v = b.opt("angle")) sp.mesh.placement.angle = num(*v, b.path("angle"));
        if (auto* v = b.opt("mid_surface")) sp.mesh.placement.mid_surface = num(*v, b.path("mid_surface"));
        b.finish();
      }
      if (auto* ov = o.opt("overlap")) {
        Obj b(*ov, o.path("overlap"), {"lower", "upper", "n_cut", "tau"});
        system::Overlap overlap;
        overlap.region.lower = vec(b.at("lower"), b.path("lower"));
        overlap.region.upper = vec(b.at("upper"), b.path("upper"));
        if (auto* v = b.opt("n_cut")) overlap.n_cut = integer(*v, b.path("n_cut"));
        if (auto* v = b.opt("tau")) overlap.tau = num(*v, b.path("tau"));
        if (overlap.n_cut < 1) fail(b.path("n_cut"), "must be positive");
        if (!(overlap.tau >= 0.0 && overlap.tau < 1.0)) fail(b.path("tau"), "must lie in [0, 1)");
        if (overlap.region.lower.size() != sp.mesh.dim() || overlap.region.upper.size() != sp.mesh.dim()) {
          fail(o.path("overlap"), "box dimension must match the structure");
        }
        b.finish();
        sp.overlap = overlap;
      }
      o.finish();
      model.structures.push_back(std::move(sp));
    }
  }

  if (const json* cs = root.opt("couplings")) {
    arr(*cs, "couplings");
    for (size_t i = 0; i < cs->size(); ++i) {
      const std::string p = join("couplings", i);
      Obj o((*cs)[i], p, {"structure", "alpha", "points", "interfaces"});
      system::CouplingSpec c;
      c.structure = integer(o.at("structure"), o.path("structure"));
      if (c.structure < 0 || c.structure >= static_cast<int>(model.structures.size())) {
        fail(o.path("structure"), "no such structure");
      }
      const json& a = o.at("alpha");
      if (a.is_string()) {
        if (a.get<std::string>() != "auto") fail(o.path("alpha"), "expected a number or \"auto\"");
      } else {
        c.alpha = num(a, o.path("alpha"));
        if (!(*c.alpha > 0.0)) fail(o.path("alpha"), "stabilization parameter must be positive");
      }
      if (auto* v = o.opt("points")) c.points = integer(*v, o.path("points"));
      const json& ifs = arr(o.at("interfaces"), o.path("interfaces"));
      for (size_t k = 0; k < ifs.size(); ++k) {
        Obj b(ifs[k], join(o.path("interfaces"), k), {"point", "normal", "tol"});
        coupling::PlaneLocator L;
        L.point = vec(b.at("point"), b.path("point"));
        L.normal = vec(b.at("normal"), b.path("normal"));
        if (auto* t = b.opt("tol")) L.tol = num(*t, b.path("tol"));
        b.finish();
        c.locators.push_back(std::move(L));
      }
      o.finish();
      model.couplings.push_back(std::move(c));
    }
  }

  auto check_part = [&](int part, const std::string& path) {
    if (part < 0 || part > static_cast<int>(model.structures.size()) || (part == 0 && !model.has_solid)) {
      fail(path, "no such part");
    }
  };

  if (const json* ds = root.opt("dirichlet")) {
    arr(*ds, "dirichlet");
    for (size_t i = 0; i < ds->size(); ++i) {
      Obj o((*ds)[i], join("dirichlet", i), {"part", "select", "components", "value"});
      system::DirichletBC bc;
      bc.part = integer(o.at("part"), o.path("part"));
      check_part(bc.part, o.path("part"));
      bc.where = selection(o.at("select"), o.path("select"));
      bc.components = ints(o.at("components"), o.path("components"));
      bc.value = field(o.at("value"), o.path("value"));
      o.finish();
      model.dirichlet.push_back(std::move(bc));
    }
  }

  if (const json* ls = root.opt("loads")) {
    Obj o(*ls, "loads", {"point", "traction", "body", "distributed", "edge"});
    if (auto* v = o.opt("point")) {
      arr(*v, o.path("point"));
      for (size_t i = 0; i < v->size(); ++i) {
        Obj b((*v)[i], join(o.path("point"), i), {"part", "x", "force"});
        system::PointLoad pl;
        pl.part = integer(b.at("part"), b.path("part"));
        check_part(pl.part, b.path("part"));
        pl.x = vec(b.at("x"), b.path("x"));
        pl.force = vec(b.at("force"), b.path("force"));
        b.finish();
        model.point_loads.push_back(std::move(pl));
      }
    }
    if (auto* v = o.opt("traction")) {
      arr(*v, o.path("traction"));
      for (size_t i = 0; i < v->size(); ++i) {
        Obj b((*v)[i], join(o.path("traction"), i), {"direction", "side", "value"});
        system::TractionLoad tl;
        tl.direction = integer(b.at("direction"), b.path("direction"));
        tl.side = integer(b.at("side"), b.path("side"));
        tl.traction = field(b.at("value"), b.path("value"));
        if (!tl.traction) fail(b.path("value"), "zero traction is a no-op; remove it");
        b.finish();
        model.tractions.push_back(std::move(tl));
      }
    }
    if (auto* v = o.opt("body")) {
      arr(*v, o.path("body"));
      for (size_t i = 0; i < v->size(); ++i) {
        Obj b((*v)[i], join(o.path("body"), i), {"b"});
        model.body_loads.push_back({vec(b.at("b"), b.path("b"))});
        b.finish();
      }
    }
    if (auto* v = o.opt("distributed")) {
      arr(*v, o.path("distributed"));
      for (size_t i = 0; i < v->size(); ++i) {
        Obj b((*v)[i], join(o.path("distributed"), i), {"part", "q"});
        system::DistributedLoad dl;
        dl.part = integer(b.at("part"), b.path("part"));
        if (dl.part < 1) fail(b.path("part"), "distributed loads act on structures");
        check_part(dl.part, b.path("part"));
        dl.q = num(b.at("q"), b.path("q"));
        b.finish();
        model.distributed_loads.push_back(dl);
      }
    }
    if (auto* v = o.opt("edge")) {
      arr(*v, o.path("edge"));
      for (size_t i = 0; i < v->size(); ++i) {
        Obj b((*v)[i], join(o.path("edge"), i), {"part", "direction", "side", "q"});
        system::EdgeLoad el;
        el.part = integer(b.at("part"), b.path("part"));
        if (el.part < 1) fail(b.path("part"), "edge loads act on plates");
        check_part(el.part, b.path("part"));
        el.direction = integer(b.at("direction"), b.path("direction"));
        el.side = integer(b.at("side"), b.path("side"));
        el.q = num(b.at("q"), b.path("q"));
        b.finish();
        model.edge_loads.push_back(el);
      }
    }
    o.finish();
  }

  if (const json* out = root.opt("output")) {
    Obj o(*out, "output", {"vtk", "lines"});
    if (auto* v = o.opt("vtk")) {
      if (!v->is_boolean()) fail(o.path("vtk"), "expected a boolean");
      rc.vtk = v->get<bool>();
    }
    if (auto* v = o.opt("lines")) {
      arr(*v, o.path("lines"));
      for (size_t i = 0; i < v->size(); ++i) {
        Obj b((*v)[i], join(o.path("lines"), i), {"name", "part", "from", "to", "n"});
        LineOutput lo;
        lo.name = str(b.at("name"), b.path("name"));
        const json& part = b.at("part");
        if (part.is_string() && part.get<std::string>() == "auto") {
          lo.part = -1;
        } else {
          lo.part = integer(part, b.path("part"));
          check_part(lo.part, b.path("part"));
        }
        lo.from = vec(b.at("from"), b.path("from"));
        lo.to = vec(b.at("to"), b.path("to"));
        lo.n = integer(b.at("n"), b.path("n"));
        if (lo.n < 2) fail(b.path("n"), "needs at least two samples");
        if (lo.from.size() != lo.to.size()) fail(b.path("to"), "dimension differs from 'from'");
        b.finish();
        rc.lines.push_back(std::move(lo));
      }
    }
    o.finish();
  }
  root.finish();
  return rc;
}

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Io, "cannot parse config '" + path + "': " + e.what());
  }
  return parse(j);
}

}  // namespace mixdim::config
