#include "fkldg/output_io.hpp"

#include "fkldg/entropy.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <array>
#include <fstream>
#include <stdexcept>

namespace fkldg {

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

// Shortest round-trip representation (fmt default for doubles).
std::string num(double x) { return fmt::format("{}", x); }

}  // namespace

void write_errors_csv(const std::string& path, const ErrorReport& r, bool has_exact) {
  auto out = open_or_throw(path);
  out << "E_c,E_sigma,dg_norm_w,mass,entropy,min_u,max_u\n";
  const std::string ec = has_exact ? num(r.E_c) : "nan";
  const std::string es = has_exact ? num(r.E_sigma) : "nan";
  out << ec << ',' << es << ',' << num(r.dg_norm_w) << ',' << num(r.mass) << ','
      << num(r.entropy) << ',' << num(r.min_u) << ',' << num(r.max_u) << '\n';
}

void write_ledger_csv(const std::string& path, const std::vector<LedgerEntry>& entries) {
  auto out = open_or_throw(path);
  out << "step,t,eps_term,entropy,sigma_term,jump_term,budget,source_work,lhs,rhs,violated\n";
  for (const auto& e : entries) {
    out << e.step << ',' << num(e.t) << ',' << num(e.eps_term) << ',' << num(e.entropy) << ','
        << num(e.sigma_term) << ',' << num(e.jump_term) << ',' << num(e.budget) << ','
        << num(e.source_work) << ',' << num(e.lhs) << ',' << num(e.rhs) << ','
        << (e.violated ? 1 : 0) << '\n';
  }
}

void write_newton_trace_csv(const std::string& path, const std::vector<StepRecord>& records,
                            const std::vector<NewtonTrace>& traces) {
  if (records.size() != traces.size())
    throw std::runtime_error("newton trace: records and traces length mismatch");
  auto out = open_or_throw(path);
  out << "step,t,iteration,increment,residual\n";
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (const auto& row : traces[i].rows) {
      out << records[i].step << ',' << num(records[i].t) << ',' << row.iteration << ','
          << num(row.increment) << ',' << num(row.residual) << '\n';
    }
  }
}

void write_activation_csv(const std::string& path, const std::vector<ActivationRow>& rows) {
  auto out = open_or_throw(path);
  out << "cell,x,y,label,t_hat\n";
  for (const auto& r : rows) {
    out << r.cell << ',' << num(r.centroid.x()) << ',' << num(r.centroid.y()) << ',' << r.label
        << ',' << num(r.t_hat) << '\n';
  }
}

void write_vtk_snapshot(const std::string& path, const DgSpace& space, const Eigen::VectorXd& W,
                        double t, int subdivision) {
  if (subdivision < 1) throw std::invalid_argument("vtk subdivision must be >= 1");
  const PolyMesh& mesh = space.mesh();
  const int n = subdivision;

  std::vector<Vec2> points;
  std::vector<double> values;
  std::vector<std::array<int, 3>> tris;
  std::vector<int> tri_cell;

  for (int k = 0; k < mesh.n_cells(); ++k) {
    const Polygon poly = mesh.cell_polygon(k);
    const Vec2 c = mesh.cell_centroids[k];
    const int p = static_cast<int>(poly.size());
    for (int e = 0; e < p; ++e) {
      const Vec2 a = poly[e];
      const Vec2 b = poly[(e + 1) % p];
      // Lattice on the fan triangle (c, a, b): rows i toward the edge.
      const int base = static_cast<int>(points.size());
      std::vector<int> row_start(n + 1);
      for (int i = 0, idx = 0; i <= n; ++i) {
        row_start[i] = base + idx;
        for (int j = 0; j <= i; ++j, ++idx) {
          const double li = static_cast<double>(i) / n;
          const double lj = (i == 0) ? 0.0 : static_cast<double>(j) / n;
          const Vec2 x = c + li * ((1.0 - lj) * (a - c) + lj * (b - c));
          points.push_back(x);
          values.push_back(entropy::u(space.eval_scalar(W, k, x)));
        }
      }
      for (int i = 1; i <= n; ++i) {
        for (int j = 0; j < i; ++j) {
          tris.push_back({row_start[i - 1] + j, row_start[i] + j, row_start[i] + j + 1});
          tri_cell.push_back(k);
          if (j + 1 < i) {
            tris.push_back({row_start[i - 1] + j, row_start[i] + j + 1, row_start[i - 1] + j + 1});
            tri_cell.push_back(k);
          }
        }
      }
    }
  }

  auto out = open_or_throw(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "concentration t=" << num(t) << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << points.size() << " double\n";
  for (const auto& x : points) out << num(x.x()) << ' ' << num(x.y()) << " 0\n";
  out << "CELLS " << tris.size() << ' ' << 4 * tris.size() << '\n';
  for (const auto& tr : tris) out << "3 " << tr[0] << ' ' << tr[1] << ' ' << tr[2] << '\n';
  out << "CELL_TYPES " << tris.size() << '\n';
  for (std::size_t i = 0; i < tris.size(); ++i) out << "5\n";
  out << "POINT_DATA " << points.size() << "\nSCALARS c double 1\nLOOKUP_TABLE default\n";
  for (double v : values) out << num(v) << '\n';
  out << "CELL_DATA " << tris.size() << "\nSCALARS cell int 1\nLOOKUP_TABLE default\n";
  for (int k : tri_cell) out << k << '\n';
  if (!mesh.labels.empty()) {
    out << "SCALARS label int 1\nLOOKUP_TABLE default\n";
    for (int k : tri_cell) out << mesh.labels[k] << '\n';
  }
}

void write_snapshot_json(const std::string& path, const DgSpace& space, const Eigen::VectorXd& W,
                         double t) {
  nlohmann::json j;
  j["format"] = "fk-snapshot";
  j["t"] = t;
  j["degree"] = space.degree();
  j["n_cells"] = space.mesh().n_cells();
  j["coeffs"] = std::vector<double>(W.data(), W.data() + W.size());
  auto out = open_or_throw(path);
  out << j.dump(1) << '\n';
}

Snapshot read_snapshot_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open snapshot '" + path + "'");
  nlohmann::json j;
  in >> j;
  if (j.value("format", "") != "fk-snapshot")
    throw std::runtime_error("'" + path + "' is not a snapshot file");
  Snapshot s;
  s.t = j.at("t").get<double>();
  s.degree = j.at("degree").get<int>();
  s.n_cells = j.at("n_cells").get<int>();
  const auto coeffs = j.at("coeffs").get<std::vector<double>>();
  const int m = (s.degree + 1) * (s.degree + 2) / 2;
  if (static_cast<int>(coeffs.size()) != s.n_cells * m)
    throw std::runtime_error("snapshot '" + path + "': coefficient count does not match degree and cell count");
  s.coeffs = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), coeffs.size());
  return s;
}

void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& M) {
  auto out = open_or_throw(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << M.rows() << ' ' << M.cols() << ' ' << M.nonZeros() << '\n';
  for (int col = 0; col < M.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, col); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << num(it.value()) << '\n';
    }
  }
}

}  // namespace fkldg
