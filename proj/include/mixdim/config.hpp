#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mixdim/system.hpp"

namespace mixdim::config {

using json = nlohmann::ordered_json;

// Sampling line for CSV output.
struct LineOutput {
  std::string name;
  int part = 0;  // -1: first part containing each sample
  Eigen::VectorXd from, to;
  int n = 2;
};

struct RunConfig {
  std::string name;
  system::Model model;
  std::vector<LineOutput> lines;
  bool vtk = false;
};

// Validates against the schema documented in docs/config.md; unknown keys,
// wrong types and bad values raise Config errors naming the key path.
RunConfig parse(const json& j);
RunConfig load(const std::string& path);  // Io error when unreadable/unparsable

// Closed-form cantilever fields used in configs and checks.
struct TimoshenkoBeam {
  double E = 3e7, nu = 0.3, D = 6.0, L = 48.0, P = 1000.0;
  double I() const { return D * D * D / 12.0; }
  Eigen::Vector2d displacement(double x, double y) const;
  Eigen::Vector3d stress(double x, double y) const;  // xx, yy, xy
};

}  // namespace mixdim::config
