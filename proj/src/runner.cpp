#include "fkldg/runner.hpp"

#include "fkldg/entropy.hpp"
#include "fkldg/mesh_io.hpp"
#include "fkldg/timeloop.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fkldg {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object()) throw std::runtime_error("config: " + where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* k) { return it.key() == k; }))
      throw std::runtime_error("config: unknown key '" + it.key() + "' in " + where);
  }
}

int iround(double v) { return static_cast<int>(std::lround(v)); }

// Trailing-3 least-squares slope of y against x; nan under 2 points.
double linfit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = std::min<int>(3, static_cast<int>(x.size()));
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const int off = static_cast<int>(x.size()) - n;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[off + i];
    my += y[off + i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < n; ++i) {
    sxy += (x[off + i] - mx) * (y[off + i] - my);
    sxx += (x[off + i] - mx) * (x[off + i] - mx);
  }
  if (sxx == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / sxx;
}

std::vector<double> log_all(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) return {};
    out[i] = std::log(v[i]);
  }
  return out;
}

}  // namespace

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto lx = log_all(x);
  const auto ly = log_all(y);
  if (lx.empty() || ly.empty() || lx.size() != ly.size())
    return std::numeric_limits<double>::quiet_NaN();
  return linfit_slope(lx, ly);
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  check_keys(j,
             {"scenario", "seeding", "mesh", "degree", "theta", "eta0", "use_facet_count", "nu",
              "tau", "T", "eps", "init", "newton", "output", "c_crit", "dump_matrices"},
             "top level");
  cfg.scenario = j.value("scenario", cfg.scenario);
  cfg.seeding = j.value("seeding", cfg.seeding);
  if (j.contains("mesh")) {
    const auto& m = j.at("mesh");
    check_keys(m, {"file", "n", "lloyd", "seed"}, "mesh");
    cfg.mesh.file = m.value("file", std::string());
    if (!cfg.mesh.file.empty() && (m.contains("n") || m.contains("lloyd") || m.contains("seed")))
      throw std::runtime_error("config: mesh takes either 'file' or generator parameters, not both");
    cfg.mesh.n = m.value("n", cfg.mesh.n);
    cfg.mesh.lloyd = m.value("lloyd", cfg.mesh.lloyd);
    cfg.mesh.seed = m.value("seed", cfg.mesh.seed);
  }
  cfg.degree = j.value("degree", cfg.degree);
  cfg.theta = j.value("theta", cfg.theta);
  cfg.eta0 = j.value("eta0", cfg.eta0);
  if (j.contains("use_facet_count")) cfg.use_facet_count = j.at("use_facet_count").get<bool>() ? 1 : 0;
  cfg.nu = j.value("nu", cfg.nu);
  cfg.tau = j.value("tau", cfg.tau);
  cfg.T = j.value("T", cfg.T);
  cfg.eps = j.value("eps", cfg.eps);
  cfg.init = j.value("init", cfg.init);
  if (j.contains("newton")) {
    const auto& n = j.at("newton");
    check_keys(n, {"tol", "max_iters", "solver", "lin_tol", "lin_max_iters"}, "newton");
    cfg.newton.tol = n.value("tol", cfg.newton.tol);
    cfg.newton.max_iters = n.value("max_iters", cfg.newton.max_iters);
    const std::string solver = n.value("solver", std::string("direct"));
    if (solver == "direct") {
      cfg.newton.iterative = false;
    } else if (solver == "iterative") {
      cfg.newton.iterative = true;
    } else {
      throw std::runtime_error("config: newton.solver must be 'direct' or 'iterative'");
    }
    cfg.newton.lin_tol = n.value("lin_tol", cfg.newton.lin_tol);
    cfg.newton.lin_max_iters = n.value("lin_max_iters", cfg.newton.lin_max_iters);
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, {"dir", "snapshot_cadence", "subdivision"}, "output");
    cfg.output.dir = o.value("dir", cfg.output.dir);
    cfg.output.snapshot_cadence = o.value("snapshot_cadence", cfg.output.snapshot_cadence);
    cfg.output.subdivision = o.value("subdivision", cfg.output.subdivision);
  }
  cfg.c_crit = j.value("c_crit", cfg.c_crit);
  cfg.dump_matrices = j.value("dump_matrices", cfg.dump_matrices);
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["scenario"] = cfg.scenario;
  if (cfg.scenario == "two-region") j["seeding"] = cfg.seeding;
  if (!cfg.mesh.file.empty()) {
    j["mesh"] = {{"file", cfg.mesh.file}};
  } else {
    j["mesh"] = {{"n", cfg.mesh.n}, {"lloyd", cfg.mesh.lloyd}, {"seed", cfg.mesh.seed}};
  }
  j["degree"] = cfg.degree;
  if (!std::isnan(cfg.theta)) j["theta"] = cfg.theta;
  if (!std::isnan(cfg.eta0)) j["eta0"] = cfg.eta0;
  if (cfg.use_facet_count >= 0) j["use_facet_count"] = cfg.use_facet_count != 0;
  j["nu"] = cfg.nu;
  j["tau"] = cfg.tau;
  if (!std::isnan(cfg.T)) j["T"] = cfg.T;
  j["eps"] = cfg.eps;
  j["init"] = cfg.init;
  j["newton"] = {{"tol", cfg.newton.tol},
                 {"max_iters", cfg.newton.max_iters},
                 {"solver", cfg.newton.iterative ? "iterative" : "direct"},
                 {"lin_tol", cfg.newton.lin_tol},
                 {"lin_max_iters", cfg.newton.lin_max_iters}};
  j["output"] = {{"dir", cfg.output.dir},
                 {"snapshot_cadence", cfg.output.snapshot_cadence},
                 {"subdivision", cfg.output.subdivision}};
  if (!std::isnan(cfg.c_crit)) j["c_crit"] = cfg.c_crit;
  j["dump_matrices"] = cfg.dump_matrices;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  json j;
  in >> j;
  return config_from_json(j);
}

RunResult run(const RunConfig& cfg_in, bool write_outputs) {
  RunConfig cfg = cfg_in;
  Scenario sc = make_scenario(cfg.scenario, cfg.seeding);
  if (std::isnan(cfg.theta)) cfg.theta = sc.theta;
  if (std::isnan(cfg.eta0)) cfg.eta0 = sc.eta0;
  if (cfg.use_facet_count < 0) cfg.use_facet_count = sc.use_facet_count ? 1 : 0;
  if (std::isnan(cfg.T)) cfg.T = sc.T_default;
  if (std::isnan(cfg.c_crit)) cfg.c_crit = sc.c_crit;
  if (cfg.output.subdivision <= 0) cfg.output.subdivision = cfg.degree + 1;

  PolyMesh mesh = cfg.mesh.file.empty()
                      ? generate_voronoi(sc.domain, cfg.mesh.n, cfg.mesh.lloyd, cfg.mesh.seed)
                      : load_mesh(cfg.mesh.file);
  if (sc.label_cells && mesh.labels.empty()) sc.label_cells(mesh);

  DgSpace space(mesh, cfg.degree);
  CoeffField coeffs = sc.coeffs(mesh);
  AssemblyOptions opts;
  opts.theta = cfg.theta;
  opts.eta0 = cfg.eta0;
  opts.use_facet_count = cfg.use_facet_count != 0;
  LdgSystem sys(space, coeffs, opts);
  NonlinearOps ops(space, coeffs);

  TimeConfig tcfg;
  tcfg.nu = cfg.nu;
  tcfg.tau = cfg.tau;
  tcfg.T = cfg.T;
  tcfg.eps = cfg.eps;
  tcfg.newton = cfg.newton;
  if (cfg.init == "rampup") {
    tcfg.init = TimeConfig::Init::rampup;
  } else if (cfg.init == "exact") {
    tcfg.init = TimeConfig::Init::exact;
  } else {
    throw std::runtime_error("config: init must be 'rampup' or 'exact'");
  }

  TimeLoop loop(sys, ops, tcfg, sc.c0, sc.exact, sc.source);
  loop.initialize();

  fs::path dir(cfg.output.dir);
  if (write_outputs) {
    fs::create_directories(dir / "snapshots");
    std::ofstream rc(dir / "resolved-config.json");
    if (!rc) throw std::runtime_error("cannot write into output directory '" + cfg.output.dir + "'");
    rc << config_to_json(cfg).dump(1) << '\n';
    save_mesh(mesh, (dir / "mesh.json").string());
  }

  // Activation accumulates the left-endpoint rule per step; the state at T
  // never contributes.
  std::vector<double> act(mesh.n_cells(), 0.0);
  for (int k = 0; k < mesh.n_cells(); ++k)
    if (sc.c0(mesh.cell_centroids[k]) < cfg.c_crit) act[k] += cfg.tau;

  RunResult res;
  res.has_exact = sc.has_exact();
  res.mesh_h = mesh.mesh_size();
  res.n_cells = mesh.n_cells();
  const int N = loop.n_steps();
  res.steps = N;

  double mn = 1.0, mx = 0.0;
  const int cadence = cfg.output.snapshot_cadence;
  for (int n = 1; n <= N; ++n) {
    loop.advance();
    const StepRecord& rec = loop.records().back();
    mn = std::min(mn, rec.min_u);
    mx = std::max(mx, rec.max_u);
    res.newton_total_iters += rec.newton_iters;
    if (n < N) {
      for (int k = 0; k < mesh.n_cells(); ++k) {
        const double u = entropy::u(space.eval_scalar(loop.W(), k, mesh.cell_centroids[k]));
        if (u < cfg.c_crit) act[k] += cfg.tau;
      }
    }
    if ((cadence > 0 && n % cadence == 0) || n == N) {
      const PositivityReport pr = positivity_scan(space, loop.W(), cfg.output.subdivision);
      mn = std::min(mn, pr.min_u);
      mx = std::max(mx, pr.max_u);
      if (write_outputs) {
        const std::string stem = fmt::format("state_{:06d}", n);
        write_vtk_snapshot((dir / "snapshots" / (stem + ".vtk")).string(), space, loop.W(),
                           rec.t, cfg.output.subdivision);
        write_snapshot_json((dir / "snapshots" / (stem + ".json")).string(), space, loop.W(),
                            rec.t);
      }
    }
  }
  res.min_u = mn;
  res.max_u = mx;

  if (res.has_exact) {
    const double T = cfg.T;
    res.errors = error_norms(
        sys, loop.W(), loop.S(), [&](const Vec2& x) { return sc.exact(x, T); },
        [&](const Vec2& x) { return sc.exact_grad(x, T); });
  } else {
    res.errors.E_c = std::numeric_limits<double>::quiet_NaN();
    res.errors.E_sigma = std::numeric_limits<double>::quiet_NaN();
    res.errors.dg_norm_w = std::sqrt(loop.W().dot(sys.A() * loop.W()));
    res.errors.mass = ops.mass_of_u(loop.W());
    res.errors.entropy = ops.entropy_of_w(loop.W());
    const PositivityReport pr = positivity_scan(space, loop.W(), cfg.output.subdivision);
    res.errors.min_u = pr.min_u;
    res.errors.max_u = pr.max_u;
  }

  res.ledger = loop.ledger().entries();
  res.ledger_checked = (cfg.nu == 1);
  res.ledger_ok = loop.ledger().compliant();

  res.activation.reserve(mesh.n_cells());
  for (int k = 0; k < mesh.n_cells(); ++k) {
    ActivationRow row;
    row.cell = k;
    row.centroid = mesh.cell_centroids[k];
    row.label = mesh.labels.empty() ? 0 : mesh.labels[k];
    row.t_hat = act[k];
    res.activation.push_back(row);
  }
  if (sc.far_region) {
    double sum = 0.0;
    int cnt = 0;
    for (const auto& row : res.activation) {
      if (sc.far_region(row.centroid)) {
        sum += row.t_hat;
        ++cnt;
      }
    }
    if (cnt > 0) res.far_mean_activation = sum / cnt;
  }

  if (write_outputs) {
    write_errors_csv((dir / "errors.csv").string(), res.errors, res.has_exact);
    write_ledger_csv((dir / "ledger.csv").string(), res.ledger);
    write_newton_trace_csv((dir / "newton-trace.csv").string(), loop.records(), loop.traces());
    write_activation_csv((dir / "activation.csv").string(), res.activation);
    if (cfg.dump_matrices) {
      fs::create_directories(dir / "matrices");
      write_matrix_market((dir / "matrices" / "A.mtx").string(), sys.A());
      write_matrix_market((dir / "matrices" / "J.mtx").string(), sys.J());
      write_matrix_market((dir / "matrices" / "B.mtx").string(), sys.B().to_sparse());
      write_matrix_market((dir / "matrices" / "MI.mtx").string(), sys.vector_mass_sparse());
      write_matrix_market((dir / "matrices" / "MD.mtx").string(), sys.diffusion_mass_sparse());
      write_matrix_market((dir / "matrices" / "Ma.mtx").string(), sys.reaction_mass_sparse());
    }
  }
  return res;
}

SweepResult convergence_sweep(const RunConfig& base, const std::string& axis,
                              const std::vector<double>& values, bool write_outputs) {
  {
    const Scenario sc = make_scenario(base.scenario, base.seeding);
    if (!sc.has_exact())
      throw std::runtime_error("sweep requires a scenario with an exact solution, '" +
                               base.scenario + "' has none");
  }
  if (axis != "h" && axis != "l" && axis != "tau" && axis != "eps")
    throw std::runtime_error("sweep axis must be one of h, l, tau, eps");
  if (values.empty()) throw std::runtime_error("sweep needs at least one value");

  SweepResult out;
  out.axis = axis;

  fs::path dir(base.output.dir);
  std::ofstream csv;
  if (write_outputs) {
    fs::create_directories(dir);
    csv.open(dir / "sweep.csv");
    if (!csv) throw std::runtime_error("cannot write into output directory '" + base.output.dir + "'");
    csv << "axis,value,h,E_c,E_sigma,slope_Ec,slope_Esigma\n" << std::flush;
  }

  std::vector<double> xs, ecs, ess;
  for (double v : values) {
    RunConfig cfg = base;
    std::string tag;
    if (axis == "h") {
      cfg.mesh.file.clear();
      cfg.mesh.n = iround(v);
      tag = fmt::format("h-{}", iround(v));
    } else if (axis == "l") {
      cfg.degree = iround(v);
      cfg.output.subdivision = 0;  // re-resolve per degree
      tag = fmt::format("l-{}", iround(v));
    } else if (axis == "tau") {
      cfg.tau = v;
      tag = fmt::format("tau-{:g}", v);
    } else {
      cfg.eps = v;
      tag = fmt::format("eps-{:g}", v);
    }
    cfg.output.dir = (dir / tag).string();

    RunResult r;
    try {
      r = run(cfg, write_outputs);
    } catch (const std::exception& e) {
      out.error = fmt::format("{} = {}: {}", axis, v, e.what());
      break;
    }
    out.points.push_back({v, r.mesh_h, r.errors.E_c, r.errors.E_sigma});

    // The l axis decays exponentially in the degree: fit log E against l
    // itself; the other axes fit log-log.
    xs.push_back(axis == "h" ? r.mesh_h : v);
    ecs.push_back(r.errors.E_c);
    ess.push_back(r.errors.E_sigma);
    double s_ec, s_es;
    if (axis == "l") {
      const auto lec = log_all(ecs), les = log_all(ess);
      s_ec = lec.empty() ? std::numeric_limits<double>::quiet_NaN() : linfit_slope(xs, lec);
      s_es = les.empty() ? std::numeric_limits<double>::quiet_NaN() : linfit_slope(xs, les);
    } else {
      s_ec = fit_loglog_slope(xs, ecs);
      s_es = fit_loglog_slope(xs, ess);
    }
    out.slope_Ec = s_ec;
    out.slope_Esigma = s_es;
    if (write_outputs) {
      csv << axis << ',' << fmt::format("{}", v) << ',' << fmt::format("{}", r.mesh_h) << ','
          << fmt::format("{}", r.errors.E_c) << ',' << fmt::format("{}", r.errors.E_sigma) << ','
          << fmt::format("{}", s_ec) << ',' << fmt::format("{}", s_es) << '\n'
          << std::flush;
    }
  }
  out.completed = (out.points.size() == values.size());
  return out;
}

}  // namespace fkldg
