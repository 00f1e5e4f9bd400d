#include "fkldg/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fkldg {

namespace {

constexpr double kPi = std::numbers::pi;

Polygon rect(double x0, double y0, double x1, double y1) {
  return {Vec2(x0, y0), Vec2(x1, y0), Vec2(x1, y1), Vec2(x0, y1)};
}

// Spatial profile shared by both manufactured solutions.
double mms_profile(const Vec2& x) {
  return 0.25 * (std::cos(2.0 * kPi * x.x()) * std::cos(2.0 * kPi * x.y()) + 2.0);
}

Vec2 mms_profile_grad(const Vec2& x) {
  const double sx = std::sin(2.0 * kPi * x.x());
  const double cx = std::cos(2.0 * kPi * x.x());
  const double sy = std::sin(2.0 * kPi * x.y());
  const double cy = std::cos(2.0 * kPi * x.y());
  return 0.25 * 2.0 * kPi * Vec2(-sx * cy, -cx * sy);
}

// The profile is a Laplace eigenfunction: lap(P) = -8 pi^2 (P - 1/2).
double mms_profile_lap(const Vec2& x) {
  return -8.0 * kPi * kPi * (mms_profile(x) - 0.5);
}

Scenario make_mms_linear_time() {
  Scenario s;
  s.name = "mms-linear-time";
  s.domain = rect(0.0, 0.0, 1.0, 1.0);
  s.T_default = 5e-2;
  const double alpha = 1.0;
  s.coeffs = [alpha](const PolyMesh& mesh) {
    return CoeffField::constant(mesh, alpha, Eigen::Matrix2d::Identity());
  };
  s.c0 = [](const Vec2& x) { return mms_profile(x); };
  s.exact = [](const Vec2& x, double t) { return mms_profile(x) * (1.0 - t); };
  s.exact_grad = [](const Vec2& x, double t) -> Vec2 { return (1.0 - t) * mms_profile_grad(x); };
  s.source = [alpha](const Vec2& x, double t) {
    const double c = mms_profile(x) * (1.0 - t);
    const double dt_c = -mms_profile(x);
    const double lap_c = (1.0 - t) * mms_profile_lap(x);
    return dt_c - lap_c - alpha * c * (1.0 - c);
  };
  return s;
}

Scenario make_mms_exp_time() {
  Scenario s;
  s.name = "mms-exp-time";
  s.domain = rect(0.0, 0.0, 1.0, 1.0);
  s.T_default = 2.0;
  const double alpha = 1.0;
  const double d = 1e-3;
  s.coeffs = [alpha, d](const PolyMesh& mesh) {
    return CoeffField::constant(mesh, alpha, d * Eigen::Matrix2d::Identity());
  };
  s.c0 = [](const Vec2& x) { return mms_profile(x); };
  s.exact = [](const Vec2& x, double t) { return mms_profile(x) * std::exp(-t); };
  s.exact_grad = [](const Vec2& x, double t) -> Vec2 { return std::exp(-t) * mms_profile_grad(x); };
  s.source = [alpha, d](const Vec2& x, double t) {
    const double et = std::exp(-t);
    const double c = mms_profile(x) * et;
    const double dt_c = -c;
    const double lap_c = et * mms_profile_lap(x);
    return dt_c - d * lap_c - alpha * c * (1.0 - c);
  };
  return s;
}

Scenario make_wave() {
  Scenario s;
  s.name = "wave";
  s.domain = rect(0.0, 0.0, 3.0, 1.0);
  s.T_default = 10.0;
  const double alpha = 1.0;
  const double d = 1e-3;
  const double v = wave_speed(alpha, d);
  s.coeffs = [alpha, d](const PolyMesh& mesh) {
    return CoeffField::constant(mesh, alpha, d * Eigen::Matrix2d::Identity());
  };
  s.c0 = [alpha, d](const Vec2& x) { return wave_profile(x.x(), alpha, d); };
  s.exact = [alpha, d, v](const Vec2& x, double t) { return wave_profile(x.x() - v * t, alpha, d); };
  s.exact_grad = [alpha, d, v](const Vec2& x, double t) -> Vec2 {
    return Vec2(wave_profile_deriv(x.x() - v * t, alpha, d), 0.0);
  };
  return s;
}

// Synthetic grey/white stand-in on a 100 x 20 mm strip: a white-matter band
// occupies 20 <= x <= 80 with horizontal fibers, grey matter elsewhere. The
// far region (x > 80) plays the role of the cortical area reached last.
Scenario make_two_region(const std::string& seeding) {
  Scenario s;
  s.name = "two-region";
  s.domain = rect(0.0, 0.0, 100.0, 20.0);
  s.T_default = 25.0;
  s.c_crit = 0.95;
  s.theta = 0.5;
  s.eta0 = 2.0;
  s.use_facet_count = true;
  s.label_cells = [](PolyMesh& mesh) {
    mesh.labels.resize(mesh.n_cells());
    for (int k = 0; k < mesh.n_cells(); ++k) {
      const double cx = mesh.cell_centroids[k].x();
      mesh.labels[k] = (cx >= 20.0 && cx <= 80.0) ? 1 : 0;
    }
  };
  s.coeffs = [](const PolyMesh& mesh) {
    const std::map<int, CoeffField::Region> regions = {
        {0, {0.45, 8.0, 0.0}},   // grey: isotropic
        {1, {0.9, 8.0, 80.0}},   // white: fast axonal transport
    };
    return CoeffField::from_regions(mesh, regions, Vec2(1.0, 0.0));
  };
  Vec2 seed;
  if (seeding == "brainstem") {
    seed = Vec2(5.0, 10.0);
  } else if (seeding == "limbic") {
    seed = Vec2(50.0, 10.0);
  } else {
    throw std::invalid_argument("two-region seeding must be 'brainstem' or 'limbic', got '" + seeding + "'");
  }
  s.c0 = [seed](const Vec2& x) {
    const double r2 = (x - seed).squaredNorm();
    return 0.8 * std::exp(-r2 / (2.0 * 5.0 * 5.0));
  };
  s.far_region = [](const Vec2& x) { return x.x() > 80.0; };
  return s;
}

}  // namespace

double wave_speed(double alpha, double d) { return 5.0 * std::sqrt(alpha * d / 6.0); }

double wave_profile(double xi, double alpha, double d) {
  const double y = 8.0 - std::sqrt(alpha / (24.0 * d)) * xi;
  const double t = 0.5 * (1.0 + std::tanh(y));
  return t * t;
}

double wave_profile_deriv(double xi, double alpha, double d) {
  const double k = std::sqrt(alpha / (24.0 * d));
  const double y = 8.0 - k * xi;
  const double sech = 1.0 / std::cosh(y);
  return -k * 0.5 * (1.0 + std::tanh(y)) * sech * sech;
}

std::vector<std::string> scenario_names() {
  return {"mms-linear-time", "mms-exp-time", "wave", "two-region"};
}

Scenario make_scenario(const std::string& name, const std::string& seeding) {
  if (name == "mms-linear-time") return make_mms_linear_time();
  if (name == "mms-exp-time") return make_mms_exp_time();
  if (name == "wave") return make_wave();
  if (name == "two-region") return make_two_region(seeding);
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

}  // namespace fkldg
