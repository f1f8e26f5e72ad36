#include "mixdim/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mixdim/errors.hpp"

namespace mixdim::output {

using Eigen::VectorXd;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const Table& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  for (size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

namespace {

// 2D plane stress [xx,yy,xy] -> [xx,yy,zz,xy,yz,xz]
VectorXd voigt6(const VectorXd& s) {
  if (s.size() == 6) return s;
  VectorXd o = VectorXd::Zero(6);
  o[0] = s[0];
  o[1] = s[1];
  o[3] = s[2];
  return o;
}

VectorXd pad3(const VectorXd& v) {
  VectorXd o = VectorXd::Zero(3);
  o.head(std::min<Eigen::Index>(3, v.size())) = v.head(std::min<Eigen::Index>(3, v.size()));
  return o;
}

}  // namespace

double von_mises(const VectorXd& voigt) {
  const VectorXd s = voigt6(voigt);
  const double d = (s[0] - s[1]) * (s[0] - s[1]) + (s[1] - s[2]) * (s[1] - s[2]) + (s[2] - s[0]) * (s[2] - s[0]);
  return std::sqrt(0.5 * d + 3.0 * (s[3] * s[3] + s[4] * s[4] + s[5] * s[5]));
}

Table sample_line(const system::System& sys, const system::Solution& sol, const config::LineOutput& line) {
  Table t;
  t.header = {"s", "x", "y", "z", "ux", "uy", "uz", "sxx", "syy", "szz", "sxy", "syz", "sxz", "part"};
  const double len = (line.to - line.from).norm();
  for (int i = 0; i < line.n; ++i) {
    const double r = static_cast<double>(i) / (line.n - 1);
    const VectorXd x = line.from + r * (line.to - line.from);
    system::Sample smp;
    int part = line.part;
    if (part >= 0) {
      smp = sys.recover(sol, part, x);
    } else {
      for (part = 0; part < sys.num_parts(); ++part) {
        if (part == 0 && !sys.model().has_solid) continue;
        try {
          smp = sys.recover(sol, part, x);
          break;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Locate && e.kind() != ErrorKind::Config) throw;
        }
      }
      if (part == sys.num_parts()) throw Error(ErrorKind::Locate, "line '" + line.name + "' leaves the model");
    }
    std::vector<double> row{r * len};
    const VectorXd xp = pad3(x), up = pad3(smp.u), sp = voigt6(smp.sigma);
    row.insert(row.end(), xp.data(), xp.data() + 3);
    row.insert(row.end(), up.data(), up.data() + 3);
    row.insert(row.end(), sp.data(), sp.data() + 6);
    row.push_back(part);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_vtk(const std::string& path, const system::System& sys, const system::Solution& sol) {
  std::vector<VectorXd> points, disp;
  std::vector<double> vm;
  std::vector<std::vector<int>> cells;
  std::vector<int> types;

  for (int part = 0; part < sys.num_parts(); ++part) {
    if (part == 0 && !sys.model().has_solid) continue;
    const auto& m = sys.part_mesh(part);
    const int d = m.dim();
    const int k = m.basis() == mesh::BasisKind::Lagrange ? 1 : 2;  // sub-cells per direction
    const std::vector<nonconforming::Label>* labels = part > 0 ? &sys.labels(part - 1) : nullptr;
    // outer-fibre offset for structures (global direction)
    VectorXd fibre;
    if (part > 0) {
      const auto& sp = sys.model().structures[static_cast<size_t>(part - 1)];
      const double h = 0.5 * sp.material.thickness;
      if (d == 1) {
        fibre = Eigen::Vector2d(-std::sin(m.placement.angle), std::cos(m.placement.angle)) * h;
      } else {
        fibre = Eigen::Vector3d(0, 0, h);
      }
    }
    const int n1 = k + 1;
    const int per = d == 1 ? n1 : d == 2 ? n1 * n1 : n1 * n1 * n1;
    for (int e = 0; e < m.num_elements(); ++e) {
      if (labels && !labels->empty() && (*labels)[static_cast<size_t>(e)] == nonconforming::Label::Void) continue;
      const int base = static_cast<int>(points.size());
      for (int q = 0; q < per; ++q) {
        const int ijk[3] = {q % n1, (q / n1) % n1, q / (n1 * n1)};
        VectorXd parent(d);
        for (int a = 0; a < d; ++a) parent[a] = -1.0 + 2.0 * ijk[a] / k;
        const VectorXd x = m.to_global(m.map_to_physical(e, parent));
        const auto s0 = sys.recover(sol, part, x);
        const double v = part == 0 ? von_mises(s0.sigma) : von_mises(sys.recover(sol, part, x + fibre).sigma);
        points.push_back(pad3(x));
        disp.push_back(pad3(s0.u));
        vm.push_back(v);
      }
      auto id = [&](int i, int j, int l) { return base + i + n1 * (j + n1 * l); };
      for (int l = 0; l < (d == 3 ? k : 1); ++l)
        for (int j = 0; j < (d >= 2 ? k : 1); ++j)
          for (int i = 0; i < k; ++i) {
            if (d == 1) {
              cells.push_back({id(i, 0, 0), id(i + 1, 0, 0)});
              types.push_back(3);
            } else if (d == 2) {
              cells.push_back({id(i, j, 0), id(i + 1, j, 0), id(i + 1, j + 1, 0), id(i, j + 1, 0)});
              types.push_back(9);
            } else {
              cells.push_back({id(i, j, l), id(i + 1, j, l), id(i + 1, j + 1, l), id(i, j + 1, l), id(i, j, l + 1),
                               id(i + 1, j, l + 1), id(i + 1, j + 1, l + 1), id(i, j + 1, l + 1)});
              types.push_back(12);
            }
          }
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << "# vtk DataFile Version 3.0\nmixdim result\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << points.size() << " double\n";
  for (const auto& p : points) out << format_number(p[0]) << ' ' << format_number(p[1]) << ' ' << format_number(p[2]) << '\n';
  size_t total = 0;
  for (const auto& c : cells) total += c.size() + 1;
  out << "CELLS " << cells.size() << ' ' << total << '\n';
  for (const auto& c : cells) {
    out << c.size();
    for (int i : c) out << ' ' << i;
    out << '\n';
  }
  out << "CELL_TYPES " << types.size() << '\n';
  for (int t : types) out << t << '\n';
  out << "POINT_DATA " << points.size() << "\nVECTORS displacement double\n";
  for (const auto& u : disp) out << format_number(u[0]) << ' ' << format_number(u[1]) << ' ' << format_number(u[2]) << '\n';
  out << "SCALARS von_mises double 1\nLOOKUP_TABLE default\n";
  for (double v : vm) out << format_number(v) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

}  // namespace mixdim::output
