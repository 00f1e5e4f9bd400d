// Python bindings: mesh generation and IO, the entropy kernel, BDF
// coefficients, and configured runs/sweeps returning summary dicts.
#include "fkldg/bdf.hpp"
#include "fkldg/entropy.hpp"
#include "fkldg/mesh_io.hpp"
#include "fkldg/runner.hpp"
#include "fkldg/scenario.hpp"

#include <json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace fkldg;

namespace {

nlohmann::json to_json(const py::handle& h) {
  if (h.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(h)) return h.cast<bool>();
  if (py::isinstance<py::int_>(h)) return h.cast<std::int64_t>();
  if (py::isinstance<py::float_>(h)) return h.cast<double>();
  if (py::isinstance<py::str>(h)) return h.cast<std::string>();
  if (py::isinstance<py::dict>(h)) {
    nlohmann::json j = nlohmann::json::object();
    for (auto item : h.cast<py::dict>()) j[item.first.cast<std::string>()] = to_json(item.second);
    return j;
  }
  if (py::isinstance<py::sequence>(h)) {
    nlohmann::json j = nlohmann::json::array();
    for (auto item : h.cast<py::sequence>()) j.push_back(to_json(item));
    return j;
  }
  throw std::runtime_error("unsupported value type in config");
}

py::dict summarize(const RunResult& r) {
  py::dict d;
  d["has_exact"] = r.has_exact;
  if (r.has_exact) {
    d["E_c"] = r.errors.E_c;
    d["E_sigma"] = r.errors.E_sigma;
  }
  d["dg_norm_w"] = r.errors.dg_norm_w;
  d["mass"] = r.errors.mass;
  d["entropy"] = r.errors.entropy;
  d["min_u"] = r.min_u;
  d["max_u"] = r.max_u;
  d["steps"] = r.steps;
  d["newton_total_iters"] = r.newton_total_iters;
  d["ledger_checked"] = r.ledger_checked;
  d["ledger_ok"] = r.ledger_ok;
  d["mesh_h"] = r.mesh_h;
  d["n_cells"] = r.n_cells;
  if (!std::isnan(r.far_mean_activation)) d["far_mean_activation"] = r.far_mean_activation;
  return d;
}

Polygon to_polygon(const std::vector<std::pair<double, double>>& pts) {
  Polygon poly;
  poly.reserve(pts.size());
  for (const auto& p : pts) poly.emplace_back(p.first, p.second);
  return poly;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entropy-stable LDG discretization of the Fisher-Kolmogorov equation";

  py::class_<PolyMesh>(m, "Mesh")
      .def_property_readonly("n_cells", &PolyMesh::n_cells)
      .def_property_readonly("h", &PolyMesh::mesh_size)
      .def_property_readonly("total_area", &PolyMesh::total_area)
      .def_readonly("labels", &PolyMesh::labels)
      .def("save", [](const PolyMesh& mesh, const std::string& path) { save_mesh(mesh, path); },
           py::arg("path"))
      .def_static("load", [](const std::string& path) { return load_mesh(path); }, py::arg("path"))
      .def_static(
          "voronoi",
          [](const std::vector<std::pair<double, double>>& domain, int n, int lloyd,
             std::uint64_t seed) { return generate_voronoi(to_polygon(domain), n, lloyd, seed); },
          py::arg("domain"), py::arg("n"), py::arg("lloyd") = 10, py::arg("seed") = 1);

  m.def(
      "bdf_coefficients",
      [](int nu) {
        const BdfScheme s = bdf_coefficients(nu);
        return py::make_tuple(s.beta, s.a);
      },
      py::arg("nu"), "Normalized BDF coefficients (beta, [a_1..a_nu])");

  m.def("u", [](double w) { return entropy::u(w); }, py::arg("w"),
        "Logistic map w -> c, strictly inside (0,1)");
  m.def("u_prime", [](double w) { return entropy::u_prime(w); }, py::arg("w"));
  m.def("entropy_s", [](double c) { return entropy::s_of_c(c); }, py::arg("c"));
  m.def("entropy_s_from_w", [](double w) { return entropy::s_from_w(w); }, py::arg("w"));
  m.def("s2", [](double w) { return entropy::s2(w); }, py::arg("w"),
        "s''(u(w)) = e^-w + 2 + e^w");
  m.def("wave_speed", &wave_speed, py::arg("alpha"), py::arg("d"));
  m.def("wave_profile", &wave_profile, py::arg("xi"), py::arg("alpha"), py::arg("d"));
  m.def("scenario_names", &scenario_names);

  m.def(
      "run",
      [](const py::dict& config, bool write_outputs) {
        const RunConfig cfg = config_from_json(to_json(config));
        return summarize(run(cfg, write_outputs));
      },
      py::arg("config"), py::arg("write_outputs") = true,
      "Execute one configured run; returns a summary dict");

  m.def(
      "sweep",
      [](const py::dict& config, const std::string& axis, const std::vector<double>& values,
         bool write_outputs) {
        const RunConfig cfg = config_from_json(to_json(config));
        const SweepResult s = convergence_sweep(cfg, axis, values, write_outputs);
        py::dict d;
        py::list pts;
        for (const auto& p : s.points) {
          py::dict e;
          e["value"] = p.value;
          e["h"] = p.h;
          e["E_c"] = p.E_c;
          e["E_sigma"] = p.E_sigma;
          pts.append(e);
        }
        d["points"] = pts;
        d["slope_Ec"] = s.slope_Ec;
        d["slope_Esigma"] = s.slope_Esigma;
        d["completed"] = s.completed;
        if (!s.error.empty()) d["error"] = s.error;
        return d;
      },
      py::arg("config"), py::arg("axis"), py::arg("values"), py::arg("write_outputs") = true,
      "Convergence sweep along axis h | l | tau | eps");
}
