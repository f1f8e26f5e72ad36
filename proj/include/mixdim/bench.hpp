#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mixdim/config.hpp"
#include "mixdim/output.hpp"
#include "mixdim/system.hpp"

namespace mixdim::bench {

using config::json;

struct Metric {
  std::string name;
  double value = 0.0;
  std::string relation = "info";  // "<=", ">=", "in", "info"
  double lo = 0.0, hi = 0.0;      // "<=" uses hi, ">=" uses lo
  bool pass() const;
};

struct Report {
  std::string name;
  std::vector<Metric> metrics;
  std::vector<std::pair<std::string, output::Table>> tables;
  std::vector<std::pair<std::string, json>> configs;  // effective configs, first is the primary one
  std::vector<double> alphas;
  int dofs = 0;
  double seconds = 0.0;

  bool pass() const;
  const Metric& metric(const std::string& name) const;  // Internal error when absent
  json to_json() const;
  void add(std::string name, double value, std::string relation = "info", double lo = 0.0, double hi = 0.0);
};

// Assembled and solved config.
struct Run {
  config::RunConfig config;
  std::unique_ptr<system::System> sys;
  system::Solution sol;
  double seconds = 0.0;
  std::vector<std::pair<std::string, output::Table>> tables;  // the config's output lines
};

Run execute(const config::RunConfig& rc);

// Generic analysis of a user config: solve, sample its lines, report DOFs,
// alphas and residual. The config is validated before any numerics.
Report run_config(const json& j, const std::string& out_dir = "");

const std::vector<std::string>& case_names();
bool has_case(const std::string& name);
json case_config(const std::string& name);  // primary effective config (Config error if unknown)
// Artifacts (including VTK of the primary model) go to out_dir when non-empty.
Report run_case(const std::string& name, const std::string& out_dir = "");

// Report JSON, CSV tables and effective configs under `dir`, named <case>.*;
// a VTK file is added when `run` is given and its config asks for one.
void write_artifacts(const std::string& dir, const Report& r, const Run* run = nullptr);

// Relative L2 difference with trapezoidal weights along a sampled line.
double relative_l2(const std::vector<double>& s, const std::vector<double>& value, const std::vector<double>& exact);

}  // namespace mixdim::bench
