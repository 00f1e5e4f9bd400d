// scenario.hpp
//
// Built-in problem setups: two manufactured solutions on the unit square, a
// traveling wave on a strip, and a two-region anisotropic configuration with
// grey/white coefficients. All use homogeneous Neumann boundaries.
#pragma once

#include "fkldg/coeff_field.hpp"
#include "fkldg/polymesh.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fkldg {

struct Scenario {
  std::string name;
  Polygon domain;       // convex CCW polygon for mesh generation
  double T_default = 1.0;
  double c_crit = 0.95;

  // Assembly defaults appropriate to the scenario's diffusion structure.
  double theta = -1.0;
  double eta0 = 1.0;
  bool use_facet_count = false;

  std::function<void(PolyMesh&)> label_cells;  // may be null
  std::function<CoeffField(const PolyMesh&)> coeffs;
  std::function<double(const Vec2&)> c0;
  std::function<double(const Vec2&, double)> exact;       // null when unknown
  std::function<Vec2(const Vec2&, double)> exact_grad;    // null when unknown
  std::function<double(const Vec2&, double)> source;      // null when zero

  // Region of interest for activation reporting (two-region): cell centroids
  // with predicate true belong to the far region.
  std::function<bool(const Vec2&)> far_region;

  bool has_exact() const { return static_cast<bool>(exact); }
};

// Traveling-wave profile and speed for the Fisher-Kolmogorov equation:
//   psi(xi) = 1/4 (1 + tanh(8 - sqrt(alpha/(24 d)) xi))^2,
//   v = 5 sqrt(alpha d / 6).
double wave_profile(double xi, double alpha, double d);
double wave_profile_deriv(double xi, double alpha, double d);
double wave_speed(double alpha, double d);

std::vector<std::string> scenario_names();

// seeding selects the two-region initial bump ("brainstem" or "limbic");
// other scenarios ignore it. Unknown names throw.
Scenario make_scenario(const std::string& name, const std::string& seeding = "brainstem");

}  // namespace fkldg
