// fk: mesh generation, configured runs, and convergence sweeps.
//
// Exit codes: 0 success, 1 failure (configuration, I/O, nonlinear solver),
// 2 successful run whose BDF1 entropy ledger reports a violation.
#include "fkldg/mesh_io.hpp"
#include "fkldg/polymesh.hpp"
#include "fkldg/runner.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <vector>

namespace {

using namespace fkldg;

int cmd_mesh_gen(const std::vector<double>& domain, int n, int lloyd, std::uint64_t seed,
                 const std::string& out) {
  const Polygon box = {Vec2(domain[0], domain[1]), Vec2(domain[2], domain[1]),
                       Vec2(domain[2], domain[3]), Vec2(domain[0], domain[3])};
  const PolyMesh mesh = generate_voronoi(box, n, lloyd, seed);
  save_mesh(mesh, out);
  fmt::print("wrote {} ({} cells, h = {:.6g})\n", out, mesh.n_cells(), mesh.mesh_size());
  return 0;
}

void apply_override(const CLI::App* cmd, const char* flag, auto&& setter) {
  if (cmd->count(flag) > 0) setter();
}

int report_run(const RunResult& r, const std::string& out_dir) {
  fmt::print("cells = {}, h = {:.6g}, steps = {}, newton iterations = {}\n", r.n_cells, r.mesh_h,
             r.steps, r.newton_total_iters);
  if (r.has_exact) fmt::print("E_c = {:.6e}, E_sigma = {:.6e}\n", r.errors.E_c, r.errors.E_sigma);
  fmt::print("u range over run: [{:.6e}, {:.17g}]\n", r.min_u, r.max_u);
  if (r.ledger_checked)
    fmt::print("entropy ledger: {}\n", r.ledger_ok ? "ok" : "VIOLATED");
  if (!std::isnan(r.far_mean_activation))
    fmt::print("far-region mean activation time = {:.4g}\n", r.far_mean_activation);
  if (!out_dir.empty()) fmt::print("outputs in {}\n", out_dir);
  if (r.ledger_checked && !r.ledger_ok) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-stable LDG solver for the Fisher-Kolmogorov equation on polygonal meshes"};
  app.require_subcommand(1);

  // fk mesh gen
  auto* mesh_cmd = app.add_subcommand("mesh", "Mesh utilities");
  mesh_cmd->require_subcommand(1);
  auto* gen = mesh_cmd->add_subcommand("gen", "Generate a Lloyd-relaxed clipped Voronoi mesh");
  std::vector<double> domain = {0.0, 0.0, 1.0, 1.0};
  int gen_n = 64;
  int gen_lloyd = 10;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "mesh.json";
  gen->add_option("--domain", domain, "Rectangle x0,y0,x1,y1")
      ->delimiter(',')
      ->expected(4)
      ->capture_default_str();
  gen->add_option("--n", gen_n, "Number of cells")->capture_default_str();
  gen->add_option("--lloyd", gen_lloyd, "Lloyd relaxation sweeps")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output mesh JSON")->capture_default_str();

  // Shared run/sweep options; CLI flags override config-file values.
  auto add_run_options = [](CLI::App* cmd, std::string& config_path, RunConfig& cfg) {
    cmd->add_option("--config", config_path, "Run configuration JSON");
    cmd->add_option("--scenario", cfg.scenario,
                    "mms-linear-time | mms-exp-time | wave | two-region");
    cmd->add_option("--seeding", cfg.seeding, "two-region seed: brainstem | limbic");
    cmd->add_option("--mesh", cfg.mesh.file, "Mesh JSON (instead of generating)");
    cmd->add_option("--mesh-n", cfg.mesh.n, "Generated mesh cell count");
    cmd->add_option("--lloyd", cfg.mesh.lloyd, "Lloyd sweeps for generated meshes");
    cmd->add_option("--seed", cfg.mesh.seed, "Mesh generator seed");
    cmd->add_option("--degree", cfg.degree, "Polynomial degree (1..8)");
    cmd->add_option("--theta", cfg.theta, "Facet mesh-size power mean exponent");
    cmd->add_option("--eta0", cfg.eta0, "Penalty scaling");
    cmd->add_option("--use-facet-count", cfg.use_facet_count,
                    "Include per-cell edge counts in the facet mesh size (0/1)");
    cmd->add_option("--nu", cfg.nu, "BDF order (1..6)");
    cmd->add_option("--tau", cfg.tau, "Time step");
    cmd->add_option("--T", cfg.T, "Final time");
    cmd->add_option("--eps", cfg.eps, "Entropy-variable penalty epsilon");
    cmd->add_option("--init", cfg.init, "History start: rampup | exact");
    cmd->add_option("--tol", cfg.newton.tol, "Newton tolerance");
    cmd->add_option("--max-iters", cfg.newton.max_iters, "Newton iteration cap");
    cmd->add_option("--out", cfg.output.dir, "Output directory");
    cmd->add_option("--snapshot-cadence", cfg.output.snapshot_cadence,
                    "Write snapshots every k steps (0: final only)");
    cmd->add_option("--subdivision", cfg.output.subdivision,
                    "VTK sample points per edge (0: degree+1)");
    cmd->add_option("--c-crit", cfg.c_crit, "Activation threshold");
    cmd->add_flag("--dump-matrices", cfg.dump_matrices, "Dump operators in Matrix Market format");
  };

  auto* run_cmd = app.add_subcommand("run", "Execute one configured run");
  std::string run_config_path;
  RunConfig run_overrides;
  add_run_options(run_cmd, run_config_path, run_overrides);

  auto* sweep_cmd = app.add_subcommand("sweep", "Convergence sweep along one axis");
  std::string sweep_config_path;
  RunConfig sweep_overrides;
  std::string sweep_axis;
  std::vector<double> sweep_values;
  sweep_cmd->add_option("--axis", sweep_axis, "h | l | tau | eps")->required();
  sweep_cmd->add_option("--values", sweep_values, "Axis values, comma separated")
      ->delimiter(',')
      ->required();
  add_run_options(sweep_cmd, sweep_config_path, sweep_overrides);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_mesh_gen(domain, gen_n, gen_lloyd, gen_seed, gen_out);

    // Merge file config with CLI overrides: start from the file, then copy
    // every flag the user actually passed.
    auto merged = [&](CLI::App* cmd, const std::string& path, const RunConfig& ov) {
      RunConfig cfg = path.empty() ? RunConfig() : load_config(path);
      apply_override(cmd, "--scenario", [&] { cfg.scenario = ov.scenario; });
      apply_override(cmd, "--seeding", [&] { cfg.seeding = ov.seeding; });
      apply_override(cmd, "--mesh", [&] { cfg.mesh.file = ov.mesh.file; });
      apply_override(cmd, "--mesh-n", [&] { cfg.mesh.n = ov.mesh.n; cfg.mesh.file.clear(); });
      apply_override(cmd, "--lloyd", [&] { cfg.mesh.lloyd = ov.mesh.lloyd; });
      apply_override(cmd, "--seed", [&] { cfg.mesh.seed = ov.mesh.seed; });
      apply_override(cmd, "--degree", [&] { cfg.degree = ov.degree; });
      apply_override(cmd, "--theta", [&] { cfg.theta = ov.theta; });
      apply_override(cmd, "--eta0", [&] { cfg.eta0 = ov.eta0; });
      apply_override(cmd, "--use-facet-count", [&] { cfg.use_facet_count = ov.use_facet_count; });
      apply_override(cmd, "--nu", [&] { cfg.nu = ov.nu; });
      apply_override(cmd, "--tau", [&] { cfg.tau = ov.tau; });
      apply_override(cmd, "--T", [&] { cfg.T = ov.T; });
      apply_override(cmd, "--eps", [&] { cfg.eps = ov.eps; });
      apply_override(cmd, "--init", [&] { cfg.init = ov.init; });
      apply_override(cmd, "--tol", [&] { cfg.newton.tol = ov.newton.tol; });
      apply_override(cmd, "--max-iters", [&] { cfg.newton.max_iters = ov.newton.max_iters; });
      apply_override(cmd, "--out", [&] { cfg.output.dir = ov.output.dir; });
      apply_override(cmd, "--snapshot-cadence",
                     [&] { cfg.output.snapshot_cadence = ov.output.snapshot_cadence; });
      apply_override(cmd, "--subdivision", [&] { cfg.output.subdivision = ov.output.subdivision; });
      apply_override(cmd, "--c-crit", [&] { cfg.c_crit = ov.c_crit; });
      apply_override(cmd, "--dump-matrices", [&] { cfg.dump_matrices = ov.dump_matrices; });
      return cfg;
    };

    if (run_cmd->parsed()) {
      const RunConfig cfg = merged(run_cmd, run_config_path, run_overrides);
      const RunResult r = run(cfg);
      return report_run(r, cfg.output.dir);
    }

    if (sweep_cmd->parsed()) {
      const RunConfig cfg = merged(sweep_cmd, sweep_config_path, sweep_overrides);
      const SweepResult s = convergence_sweep(cfg, sweep_axis, sweep_values);
      fmt::print("axis = {}\n", s.axis);
      fmt::print("{:>12} {:>12} {:>14} {:>14}\n", "value", "h", "E_c", "E_sigma");
      for (const auto& p : s.points)
        fmt::print("{:>12.6g} {:>12.6g} {:>14.6e} {:>14.6e}\n", p.value, p.h, p.E_c, p.E_sigma);
      fmt::print("slope(E_c) = {:.4g}, slope(E_sigma) = {:.4g}\n", s.slope_Ec, s.slope_Esigma);
      if (!s.completed) {
        fmt::print(stderr, "sweep aborted: {}\n", s.error);
        return 1;
      }
      return 0;
    }
  } catch (const NewtonFailure& e) {
    fmt::print(stderr, "newton failure: {}\n", e.what());
    for (const auto& row : e.trace.rows)
      fmt::print(stderr, "  iteration {}: increment {:.3e}, residual {:.3e}\n", row.iteration,
                 row.increment, row.residual);
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
