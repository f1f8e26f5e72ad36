// Batch front-end: run a config, run bench cases, or estimate alpha.
// Exit codes: 0 ok, 2 a tolerance failed, 1 any error.
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mixdim/bench.hpp"
#include "mixdim/config.hpp"
#include "mixdim/errors.hpp"
#include "mixdim/system.hpp"

namespace {

using mixdim::config::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mixdim::Error(mixdim::ErrorKind::Io, "cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    throw mixdim::Error(mixdim::ErrorKind::Io, "cannot parse config '" + path + "': " + e.what());
  }
}

void print_report(const mixdim::bench::Report& r) {
  std::printf("%s: %s (%.2f s, %d dofs)\n", r.name.c_str(), r.pass() ? "pass" : "FAIL", r.seconds, r.dofs);
  for (const auto& m : r.metrics) {
    std::printf("  %-40s %.10g", m.name.c_str(), m.value);
    if (m.relation == "<=") std::printf("  (<= %g)", m.hi);
    if (m.relation == ">=") std::printf("  (>= %g)", m.lo);
    if (m.relation == "in") std::printf("  (in [%g, %g])", m.lo, m.hi);
    if (m.relation != "info") std::printf("  %s", m.pass() ? "ok" : "FAIL");
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed-dimensional solid/beam/plate coupling"};
  app.require_subcommand(1);
  std::string out_dir = "out";
  bool quiet = false;
  app.add_option("--out-dir", out_dir, "directory for CSV/VTK/report output")->capture_default_str();
  app.add_flag("--quiet", quiet, "only print failures and errors");

  std::string run_path, alpha_path, case_name;
  auto* run = app.add_subcommand("run", "solve the model of a JSON config");
  run->add_option("config", run_path, "config file")->required();
  auto* bench = app.add_subcommand("bench", "run a bench case, or all of them");
  bench->add_option("name", case_name, "case name or 'all'")->required();
  auto* list = app.add_subcommand("list", "print the bench case names");
  auto* alpha = app.add_subcommand("alpha", "estimate the stabilization parameter of a config");
  alpha->add_option("config", alpha_path, "config file")->required();
  for (auto* sub : {run, bench, alpha}) {
    sub->add_option("--out-dir", out_dir, "directory for CSV/VTK/report output");
    sub->add_flag("--quiet", quiet, "only print failures and errors");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*list) {
      for (const auto& n : mixdim::bench::case_names()) std::printf("%s\n", n.c_str());
      return 0;
    }
    if (*alpha) {
      const auto rc = mixdim::config::parse(read_json(alpha_path));
      mixdim::system::System sys(rc.model);
      if (rc.model.couplings.empty()) throw mixdim::Error(mixdim::ErrorKind::Config, "config has no coupling");
      for (size_t c = 0; c < rc.model.couplings.size(); ++c) {
        const auto est = sys.estimate(static_cast<int>(c));
        std::printf("coupling %zu: alpha = %.6e  lambda1 = %.6e  iterations = %d%s\n", c, est.alpha, est.lambda1,
                    est.iterations, est.shifted ? "  (shifted)" : "");
      }
      return 0;
    }
    if (*run) {
      const auto rep = mixdim::bench::run_config(read_json(run_path), out_dir);
      if (!quiet) print_report(rep);
      return 0;
    }
    std::vector<std::string> names;
    if (case_name == "all") {
      names = mixdim::bench::case_names();
    } else {
      if (!mixdim::bench::has_case(case_name)) {
        throw mixdim::Error(mixdim::ErrorKind::Config, "unknown bench case '" + case_name + "'");
      }
      names = {case_name};
    }
    bool ok = true;
    for (const auto& n : names) {
      const auto rep = mixdim::bench::run_case(n, out_dir);
      ok = ok && rep.pass();
      if (!quiet || !rep.pass()) print_report(rep);
    }
    return ok ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }
}
