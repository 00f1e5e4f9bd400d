// output_io.hpp
//
// Run artifacts: CSV tables, legacy ASCII VTK fields of u(w_h), raw JSON
// coefficient snapshots, and Matrix Market dumps. All writers emit full
// double precision and contain no timestamps, so reruns are byte-identical.
#pragma once

#include "fkldg/dgspace.hpp"
#include "fkldg/diagnostics.hpp"
#include "fkldg/timeloop.hpp"

#include <Eigen/Sparse>
#include <string>
#include <vector>

namespace fkldg {

void write_errors_csv(const std::string& path, const ErrorReport& report, bool has_exact);

void write_ledger_csv(const std::string& path, const std::vector<LedgerEntry>& entries);

// One row per Newton iteration of every step.
void write_newton_trace_csv(const std::string& path, const std::vector<StepRecord>& records,
                            const std::vector<NewtonTrace>& traces);

struct ActivationRow {
  int cell = 0;
  Vec2 centroid = Vec2::Zero();
  int label = 0;
  double t_hat = 0.0;
};
void write_activation_csv(const std::string& path, const std::vector<ActivationRow>& rows);

// Concentration field sampled on a fan triangulation of each cell with
// `subdivision` points per edge (>= 1). Cells stay disconnected so the DG
// jumps are visible. Labels are attached as cell data when present.
void write_vtk_snapshot(const std::string& path, const DgSpace& space, const Eigen::VectorXd& W,
                        double t, int subdivision);

// Raw coefficient snapshot:
//   { "format": "fk-snapshot", "t": ..., "degree": ..., "n_cells": ...,
//     "coeffs": [...] }  (entropy-variable coefficients, cell-blocked)
void write_snapshot_json(const std::string& path, const DgSpace& space, const Eigen::VectorXd& W,
                         double t);
struct Snapshot {
  double t = 0.0;
  int degree = 0;
  int n_cells = 0;
  Eigen::VectorXd coeffs;
};
Snapshot read_snapshot_json(const std::string& path);

void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& M);

}  // namespace fkldg
