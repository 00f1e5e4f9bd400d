// mesh_io.cpp

#include "fkldg/mesh_io.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace fkldg {

PolyMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("load_mesh: cannot open '{}'", path));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(fmt::format("load_mesh: '{}' is not valid JSON: {}", path, e.what()));
  }
  if (!j.contains("vertices") || !j.contains("cells"))
    throw std::runtime_error(fmt::format("load_mesh: '{}' lacks vertices or cells", path));

  PolyMesh mesh;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_array() || v.size() != 2)
      throw std::runtime_error("load_mesh: each vertex must be [x, y]");
    mesh.vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
  }
  for (const auto& c : j.at("cells")) {
    std::vector<int> loop;
    for (const auto& i : c) loop.push_back(i.get<int>());
    mesh.cells.push_back(std::move(loop));
  }
  if (j.contains("labels")) {
    for (const auto& l : j.at("labels")) mesh.labels.push_back(l.get<int>());
  }
  if (j.contains("axonal")) {
    for (const auto& a : j.at("axonal")) {
      if (!a.is_array() || a.size() != 2)
        throw std::runtime_error("load_mesh: each axonal entry must be [ax, ay]");
      mesh.axonal.emplace_back(a[0].get<double>(), a[1].get<double>());
    }
  }
  mesh.finalize();
  return mesh;
}

void save_mesh(const PolyMesh& mesh, const std::string& path) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (const Vec2& v : mesh.vertices) j["vertices"].push_back({v.x(), v.y()});
  j["cells"] = mesh.cells;
  j["labels"] = mesh.labels;
  if (!mesh.axonal.empty()) {
    j["axonal"] = nlohmann::json::array();
    for (const Vec2& a : mesh.axonal) j["axonal"].push_back({a.x(), a.y()});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("save_mesh: cannot write '{}'", path));
  out << j.dump(1) << "\n";
}

}  // namespace fkldg
