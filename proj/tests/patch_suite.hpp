#pragma once

#include <string>
#include <vector>

#include "mixdim/system.hpp"

// Consistency states transmitted across every coupling variant: rigid motion
// and a constant generalized stress (axial force for Timoshenko beams and
// frames, uniform moment for the rotation-free beam and both plates).
namespace patch {

enum class Variant { BeamEB, BeamTimoshenko, PlateKirchhoff, PlateMindlin, Frame };
enum class State { Rigid, ConstantStress, TipShear };

struct Case {
  std::string name;
  Variant variant;
  double phi = 0.0;  // frame angle
};

std::vector<Case> cases();

mixdim::system::Model build(const Case& c, State s);

struct Result {
  std::string name;
  double jump_energy = 0.0, jump_bound = 0.0;      // a^T (alpha K^st) a vs 1e-9 alpha |a|^2
  double stress_error = 0.0, stress_bound = 0.0;   // max |sigma - exact| vs 1e-8 E
  bool pass() const { return jump_energy <= jump_bound && stress_error <= stress_bound; }
};

Result run(const Case& c, State s);

// Global rotation by phi (2D).
Eigen::Matrix2d rotation(double phi);

}  // namespace patch
