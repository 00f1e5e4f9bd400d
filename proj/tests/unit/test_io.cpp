// File formats: mesh JSON, coefficient snapshots, run configuration parsing,
// CSV layouts, Matrix Market dumps, VTK structure.
#include "fkldg/mesh_io.hpp"
#include "fkldg/output_io.hpp"
#include "fkldg/runner.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fkldg;
namespace fs = std::filesystem;

namespace {

fs::path tmpdir() {
  const fs::path d = fs::temp_directory_path() / "fkldg-io-tests";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("mesh JSON round-trip preserves geometry, labels and fibers") {
  PolyMesh m = generate_voronoi({{0.0, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {0.0, 1.0}}, 9, 3, 6);
  for (int k = 0; k < m.n_cells(); ++k) m.labels[k] = k % 2;
  m.axonal.assign(m.n_cells(), Vec2(1.0, 0.0));

  const fs::path path = tmpdir() / "mesh.json";
  save_mesh(m, path.string());
  const PolyMesh r = load_mesh(path.string());

  REQUIRE(r.n_cells() == m.n_cells());
  REQUIRE(r.vertices.size() == m.vertices.size());
  for (size_t i = 0; i < m.vertices.size(); ++i) {
    CHECK(r.vertices[i].x() == m.vertices[i].x());  // exact: doubles round-trip
    CHECK(r.vertices[i].y() == m.vertices[i].y());
  }
  CHECK(r.cells == m.cells);
  CHECK(r.labels == m.labels);
  REQUIRE(r.axonal.size() == m.axonal.size());
  CHECK(r.total_area() == doctest::Approx(m.total_area()).epsilon(1e-15));
  CHECK(r.n_interior_facets() == m.n_interior_facets());
}

TEST_CASE("malformed mesh files are rejected with context") {
  const fs::path d = tmpdir();
  auto write = [&](const char* name, const char* text) {
    std::ofstream(d / name) << text;
    return (d / name).string();
  };
  CHECK_THROWS(load_mesh(write("missing.json", R"({"vertices": [[0,0],[1,0],[1,1]]})")));
  CHECK_THROWS(load_mesh(write("badidx.json",
                               R"({"vertices": [[0,0],[1,0],[1,1]], "cells": [[0,1,9]]})")));
  CHECK_THROWS(load_mesh(write("notjson.json", "vertices: nope")));
  CHECK_THROWS(load_mesh((d / "does-not-exist.json").string()));
  // Label array of the wrong length.
  CHECK_THROWS(load_mesh(write(
      "badlabel.json",
      R"({"vertices": [[0,0],[1,0],[1,1],[0,1]], "cells": [[0,1,2,3]], "labels": [1, 2]})")));
}

TEST_CASE("snapshot JSON round-trip is exact") {
  const PolyMesh m = generate_voronoi({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}, 5, 2, 3);
  const DgSpace space(m, 2);
  Eigen::VectorXd W(space.n_scalar_dofs());
  for (int i = 0; i < W.size(); ++i) W[i] = std::sin(i * 0.7) * std::pow(10.0, (i % 7) - 3);

  const fs::path path = tmpdir() / "state.json";
  write_snapshot_json(path.string(), space, W, 0.125);
  const Snapshot snap = read_snapshot_json(path.string());
  CHECK(snap.t == 0.125);
  CHECK(snap.degree == 2);
  CHECK(snap.n_cells == m.n_cells());
  REQUIRE(snap.coeffs.size() == W.size());
  for (int i = 0; i < W.size(); ++i) CHECK(snap.coeffs[i] == W[i]);

  // Size mismatch with the space is detected on read through the header.
  std::ofstream(path) << R"({"format": "fk-snapshot", "t": 0, "degree": 2, "n_cells": 5,
                            "coeffs": [1, 2, 3]})";
  CHECK_THROWS(read_snapshot_json(path.string()));
}

TEST_CASE("run configuration parsing") {
  using nlohmann::json;
  const json good = {{"scenario", "wave"},
                     {"degree", 3},
                     {"nu", 2},
                     {"tau", 0.05},
                     {"T", 1.0},
                     {"mesh", {{"n", 40}, {"lloyd", 5}, {"seed", 11}}},
                     {"newton", {{"tol", 1e-9}, {"solver", "iterative"}}},
                     {"output", {{"dir", "/tmp/x"}, {"snapshot_cadence", 2}}}};
  const RunConfig cfg = config_from_json(good);
  CHECK(cfg.scenario == "wave");
  CHECK(cfg.degree == 3);
  CHECK(cfg.nu == 2);
  CHECK(cfg.tau == 0.05);
  CHECK(cfg.mesh.n == 40);
  CHECK(cfg.mesh.seed == 11);
  CHECK(cfg.newton.tol == 1e-9);
  CHECK(cfg.newton.iterative);
  CHECK(cfg.output.dir == "/tmp/x");
  CHECK(cfg.output.snapshot_cadence == 2);

  // Unknown keys are rejected at every level.
  CHECK_THROWS(config_from_json(json{{"scenario", "wave"}, {"bogus", 1}}));
  CHECK_THROWS(config_from_json(json{{"mesh", {{"n", 10}, {"typo", 1}}}}));
  CHECK_THROWS(config_from_json(json{{"newton", {{"tolerance", 1e-9}}}}));
  // A mesh file excludes generator parameters.
  CHECK_THROWS(config_from_json(json{{"mesh", {{"file", "m.json"}, {"n", 10}}}}));
  // Unknown solver name.
  CHECK_THROWS(config_from_json(json{{"newton", {{"solver", "sor"}}}}));

  // Round trip through config_to_json parses back to the same values.
  const RunConfig back = config_from_json(config_to_json(cfg));
  CHECK(back.scenario == cfg.scenario);
  CHECK(back.degree == cfg.degree);
  CHECK(back.tau == cfg.tau);
  CHECK(back.newton.tol == cfg.newton.tol);
  CHECK(back.output.snapshot_cadence == cfg.output.snapshot_cadence);
}

TEST_CASE("CSV layouts") {
  const fs::path d = tmpdir();

  ErrorReport rep;
  rep.E_c = 1.25e-3;
  rep.E_sigma = 0.5;
  rep.dg_norm_w = 2.0;
  rep.mass = 0.4;
  rep.entropy = 0.1;
  rep.min_u = 1e-9;
  rep.max_u = 1.0 - 1e-9;
  write_errors_csv((d / "errors.csv").string(), rep, true);
  std::string text = slurp(d / "errors.csv");
  CHECK(text.find("E_c,E_sigma,dg_norm_w,mass,entropy,min_u,max_u") == 0);
  CHECK(text.find("0.00125") != std::string::npos);

  // Without an exact solution the error columns hold nan placeholders.
  write_errors_csv((d / "errors2.csv").string(), rep, false);
  CHECK(slurp(d / "errors2.csv").find("nan,nan") != std::string::npos);

  std::vector<ActivationRow> rows(2);
  rows[0] = {0, Vec2(0.5, 0.25), 1, 3.75};
  rows[1] = {1, Vec2(1.5, 0.75), 0, 0.0};
  write_activation_csv((d / "activation.csv").string(), rows);
  text = slurp(d / "activation.csv");
  CHECK(text.find("cell,x,y,label,t_hat") == 0);
  CHECK(text.find("0,0.5,0.25,1,3.75") != std::string::npos);

  // Trace writer requires matching record/trace lengths.
  std::vector<StepRecord> recs(1);
  std::vector<NewtonTrace> traces(2);
  CHECK_THROWS(write_newton_trace_csv((d / "t.csv").string(), recs, traces));
}

TEST_CASE("matrix market dump") {
  Eigen::SparseMatrix<double> M(3, 4);
  M.insert(0, 0) = 1.5;
  M.insert(2, 1) = -2.25;
  M.insert(1, 3) = 1e-17;
  M.makeCompressed();
  const fs::path path = tmpdir() / "m.mtx";
  write_matrix_market(path.string(), M);
  std::istringstream in(slurp(path));
  std::string header;
  std::getline(in, header);
  CHECK(header == "%%MatrixMarket matrix coordinate real general");
  int rows, cols, nnz;
  in >> rows >> cols >> nnz;
  CHECK(rows == 3);
  CHECK(cols == 4);
  CHECK(nnz == 3);
  double sum = 0.0;
  for (int i = 0; i < nnz; ++i) {
    int r, c;
    double v;
    in >> r >> c >> v;
    CHECK(r >= 1);
    CHECK(c >= 1);
    sum += v;
  }
  CHECK(sum == doctest::Approx(1.5 - 2.25 + 1e-17));
}

TEST_CASE("VTK snapshot structure") {
  const PolyMesh m = generate_voronoi({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}, 4, 2, 8);
  const DgSpace space(m, 1);
  const Eigen::VectorXd W = Eigen::VectorXd::Zero(space.n_scalar_dofs());
  const fs::path path = tmpdir() / "snap.vtk";
  write_vtk_snapshot(path.string(), space, W, 0.5, 2);
  const std::string text = slurp(path);
  CHECK(text.rfind("# vtk DataFile Version", 0) == 0);
  CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(text.find("POINT_DATA") != std::string::npos);
  CHECK(text.find("CELL_DATA") != std::string::npos);
  // w = 0 renders the constant one half.
  CHECK(text.find("0.5") != std::string::npos);
}
