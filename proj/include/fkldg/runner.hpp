// runner.hpp
//
// Configured runs and convergence sweeps. A run wires scenario, mesh, space,
// operators and time loop together, executes to T, and writes the artifact
// set (errors.csv, ledger.csv, newton-trace.csv, activation.csv, snapshots,
// resolved-config.json) into the output directory.
#pragma once

#include "fkldg/newton.hpp"
#include "fkldg/output_io.hpp"
#include "fkldg/scenario.hpp"

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace fkldg {

struct MeshSpec {
  std::string file;  // nonempty: load from JSON, ignore the generator fields
  int n = 64;
  int lloyd = 10;
  std::uint64_t seed = 1;
};

struct OutputSpec {
  std::string dir = "out";
  int snapshot_cadence = 0;  // every k-th step; 0 writes only the final state
  int subdivision = 0;       // VTK points per edge; 0 means degree + 1
};

// Unset optional fields (nan / -1) resolve to scenario defaults.
struct RunConfig {
  std::string scenario = "mms-linear-time";
  std::string seeding = "brainstem";
  MeshSpec mesh;
  int degree = 1;
  double theta = std::numeric_limits<double>::quiet_NaN();
  double eta0 = std::numeric_limits<double>::quiet_NaN();
  int use_facet_count = -1;  // tri-state: -1 scenario default, else 0/1
  int nu = 1;
  double tau = 1e-3;
  double T = std::numeric_limits<double>::quiet_NaN();
  double eps = 0.0;
  std::string init = "rampup";  // or "exact" (needs an exact solution)
  NewtonConfig newton;
  OutputSpec output;
  double c_crit = std::numeric_limits<double>::quiet_NaN();
  bool dump_matrices = false;
};

// Rejects unknown keys and malformed values with a descriptive error.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::string& path);

struct RunResult {
  bool has_exact = false;
  ErrorReport errors;       // E_c/E_sigma meaningful only when has_exact
  double min_u = 1.0;       // over all steps, quadrature + output samples
  double max_u = 0.0;
  int steps = 0;
  int newton_total_iters = 0;
  bool ledger_checked = false;  // BDF1 only
  bool ledger_ok = true;
  std::vector<LedgerEntry> ledger;
  std::vector<ActivationRow> activation;
  double far_mean_activation = std::numeric_limits<double>::quiet_NaN();
  double mesh_h = 0.0;
  int n_cells = 0;
};

// write_outputs=false runs in memory only (used by sweeps and tests).
RunResult run(const RunConfig& cfg, bool write_outputs = true);

// Least-squares slope of log(y) against log(x) over the trailing
// min(points, 3) entries; nan when fewer than 2 usable points.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct SweepPoint {
  double value = 0.0;  // the axis value
  double h = 0.0;      // measured mesh size of the sub-run
  double E_c = 0.0;
  double E_sigma = 0.0;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepPoint> points;
  double slope_Ec = std::numeric_limits<double>::quiet_NaN();
  double slope_Esigma = std::numeric_limits<double>::quiet_NaN();
  bool completed = false;
  std::string error;  // first sub-run failure, empty when completed
};

// axis is one of "h" (cell counts), "l" (degrees), "tau", "eps". Slopes fit
// E against h for the h axis, against the value for tau/eps, and against
// the degree on a semilog scale for the l axis. Results append to
// <output.dir>/sweep.csv row by row, so partial tables survive failures.
SweepResult convergence_sweep(const RunConfig& base, const std::string& axis,
                              const std::vector<double>& values, bool write_outputs = true);

}  // namespace fkldg
