#pragma once

#include <string>
#include <vector>

#include "mixdim/config.hpp"
#include "mixdim/system.hpp"

namespace mixdim::output {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string format_number(double v);  // 17 significant digits
void write_csv(const std::string& path, const Table& t);

double von_mises(const Eigen::VectorXd& voigt);  // 3 (plane stress) or 6 components

// Columns s,x,y,z,ux,uy,uz,sxx,syy,szz,sxy,syz,sxz,part. Beam samples at an
// offset from the axis see the prolonged fields.
Table sample_line(const system::System& sys, const system::Solution& sol, const config::LineOutput& line);

// Legacy ASCII VTK unstructured grid with every part; beams and plates are
// drawn on their axis/mid-surface with stresses taken at the outer fibre.
// Void structural elements are left out.
void write_vtk(const std::string& path, const system::System& sys, const system::Solution& sol);

}  // namespace mixdim::output
