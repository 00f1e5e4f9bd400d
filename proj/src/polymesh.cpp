// polymesh.cpp

#include "fkldg/polymesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace fkldg {

int PolyMesh::n_interior_facets() const {
  int n = 0;
  for (const Facet& f : facets) n += f.interior ? 1 : 0;
  return n;
}

double PolyMesh::mesh_size() const {
  double h = 0.0;
  for (double d : cell_diameters) h = std::max(h, d);
  return h;
}

double PolyMesh::total_area() const {
  double a = 0.0;
  for (double v : cell_areas) a += v;
  return a;
}

Polygon PolyMesh::cell_polygon(int k) const {
  Polygon p;
  p.reserve(cells[k].size());
  for (int v : cells[k]) p.push_back(vertices[v]);
  return p;
}

double PolyMesh::mesh_size_on_facet(int facet, double theta, double eta_F,
                                    bool use_facet_count) const {
  const Facet& f = facets[facet];
  if (!f.interior) throw std::runtime_error("mesh_size_on_facet: boundary facet");
  if (eta_F <= 0.0 || theta == 0.0)
    throw std::runtime_error("mesh_size_on_facet: need eta_F > 0 and theta != 0");
  auto ratio = [&](int k) {
    const double m = use_facet_count ? static_cast<double>(cells[k].size()) : 1.0;
    return cell_areas[k] / (m * f.length);
  };
  const double a1 = ratio(f.k1), a2 = ratio(f.k2);
  return std::pow(0.5 * (std::pow(a1, theta) + std::pow(a2, theta)), 1.0 / theta) / eta_F;
}

void PolyMesh::finalize() {
  const int nc = n_cells();
  const int nv = static_cast<int>(vertices.size());
  cell_areas.assign(nc, 0.0);
  cell_centroids.assign(nc, Vec2::Zero());
  cell_diameters.assign(nc, 0.0);
  if (labels.empty()) labels.assign(nc, 0);
  if (static_cast<int>(labels.size()) != nc)
    throw std::runtime_error("PolyMesh: label count does not match cell count");
  if (!axonal.empty() && static_cast<int>(axonal.size()) != nc)
    throw std::runtime_error("PolyMesh: axonal direction count does not match cell count");

  for (int k = 0; k < nc; ++k) {
    if (cells[k].size() < 3)
      throw std::runtime_error(fmt::format("PolyMesh: cell {} has fewer than 3 vertices", k));
    for (int v : cells[k])
      if (v < 0 || v >= nv)
        throw std::runtime_error(fmt::format("PolyMesh: cell {} references vertex {}", k, v));
    const Polygon p = cell_polygon(k);
    const double a = polygon_signed_area(p);
    if (a <= 0.0)
      throw std::runtime_error(
          fmt::format("PolyMesh: cell {} is not counter-clockwise (area {})", k, a));
    if (!polygon_is_simple(p))
      throw std::runtime_error(fmt::format("PolyMesh: cell {} is self-intersecting", k));
    cell_areas[k] = a;
    cell_centroids[k] = polygon_centroid(p);
    cell_diameters[k] = polygon_diameter(p);
  }

  // Facets from the undirected edge multimap; a conforming mesh visits every
  // interior edge exactly twice, in opposite directions.
  struct EdgeUse {
    int cell;
    int a, b;  // traversal order within the cell
  };
  std::map<std::pair<int, int>, std::vector<EdgeUse>> edge_map;
  for (int k = 0; k < nc; ++k) {
    const auto& loop = cells[k];
    const int m = static_cast<int>(loop.size());
    for (int i = 0; i < m; ++i) {
      const int a = loop[i], b = loop[(i + 1) % m];
      if (a == b)
        throw std::runtime_error(fmt::format("PolyMesh: cell {} repeats vertex {}", k, a));
      edge_map[{std::min(a, b), std::max(a, b)}].push_back({k, a, b});
    }
  }

  facets.clear();
  cell_facets.assign(nc, {});
  double boundary_area = 0.0;  // Green's theorem over boundary facets
  for (const auto& [key, uses] : edge_map) {
    if (uses.size() > 2)
      throw std::runtime_error(fmt::format("PolyMesh: edge ({}, {}) used by {} cells", key.first,
                                           key.second, uses.size()));
    Facet f;
    f.v0 = key.first;
    f.v1 = key.second;
    const Vec2 t = vertices[f.v1] - vertices[f.v0];
    f.length = t.norm();
    if (f.length == 0.0)
      throw std::runtime_error(
          fmt::format("PolyMesh: zero-length edge ({}, {})", key.first, key.second));
    if (uses.size() == 2) {
      if (uses[0].a == uses[1].a)
        throw std::runtime_error(
            fmt::format("PolyMesh: cells {} and {} traverse edge ({}, {}) in the same direction",
                        uses[0].cell, uses[1].cell, key.first, key.second));
      const EdgeUse& lo = uses[0].cell < uses[1].cell ? uses[0] : uses[1];
      const EdgeUse& hi = uses[0].cell < uses[1].cell ? uses[1] : uses[0];
      f.k1 = lo.cell;
      f.k2 = hi.cell;
      f.interior = true;
      // Outward normal of k1 along its CCW traversal a->b.
      const Vec2 d = vertices[lo.b] - vertices[lo.a];
      f.normal = Vec2(d.y(), -d.x()) / d.norm();
    } else {
      const EdgeUse& u = uses[0];
      f.k1 = u.cell;
      f.k2 = -1;
      f.interior = false;
      const Vec2 d = vertices[u.b] - vertices[u.a];
      f.normal = Vec2(d.y(), -d.x()) / d.norm();
      boundary_area += 0.5 * cross2(vertices[u.a], vertices[u.b]);
    }
    const int fi = static_cast<int>(facets.size());
    facets.push_back(f);
    cell_facets[f.k1].push_back(fi);
    if (f.interior) cell_facets[f.k2].push_back(fi);
  }

  const double part_area = total_area();
  if (std::abs(part_area - boundary_area) > 1e-10 * std::abs(part_area))
    throw std::runtime_error(
        fmt::format("PolyMesh: cell areas sum to {} but the boundary encloses {}; "
                    "mesh is non-conforming",
                    part_area, boundary_area));
}

// --- Voronoi generation ------------------------------------------------------

namespace {

// Uniform double in [0,1) from the top 53 bits; keeps generation independent
// of the library's distribution implementation.
double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

std::vector<Vec2> draw_generators(const Polygon& domain, int n, std::mt19937_64& rng) {
  const auto [lo, hi] = polygon_bbox(domain);
  std::vector<Vec2> g;
  g.reserve(n);
  int guard = 0;
  while (static_cast<int>(g.size()) < n) {
    if (++guard > 100000 * n)
      throw std::runtime_error("generate_voronoi: rejection sampling failed");
    Vec2 p(lo.x() + uniform01(rng) * (hi.x() - lo.x()),
           lo.y() + uniform01(rng) * (hi.y() - lo.y()));
    if (convex_contains(domain, p)) g.push_back(p);
  }
  return g;
}

bool has_duplicates(const std::vector<Vec2>& g, double tol) {
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = i + 1; j < g.size(); ++j)
      if ((g[i] - g[j]).norm() < tol) return true;
  return false;
}

// Clipped Voronoi cell of generator i: intersect the domain with the
// half-planes of the nearest-first bisectors, stopping once the remaining
// generators cannot cut the current polygon.
Polygon voronoi_cell(const Polygon& domain, const std::vector<Vec2>& g, int i,
                     std::vector<std::pair<double, int>>& scratch) {
  const int n = static_cast<int>(g.size());
  scratch.clear();
  for (int j = 0; j < n; ++j)
    if (j != i) scratch.push_back({(g[j] - g[i]).squaredNorm(), j});
  std::sort(scratch.begin(), scratch.end());

  Polygon poly = domain;
  double radius2 = 0.0;
  for (const Vec2& v : poly) radius2 = std::max(radius2, (v - g[i]).squaredNorm());
  for (const auto& [d2, j] : scratch) {
    if (0.25 * d2 >= radius2) break;
    const Vec2 nrm = g[j] - g[i];
    const double b = nrm.dot(0.5 * (g[i] + g[j]));
    poly = clip_halfplane(poly, nrm, b);
    if (poly.size() < 3) throw std::runtime_error("generate_voronoi: empty Voronoi cell");
    radius2 = 0.0;
    for (const Vec2& v : poly) radius2 = std::max(radius2, (v - g[i]).squaredNorm());
  }
  return poly;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double t = std::clamp(d.dot(p - a) / d.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

PolyMesh build_mesh(const Polygon& domain, const std::vector<Polygon>& cells) {
  const double diam = polygon_diameter(domain);
  const double snap = 1e-9 * diam;
  PolyMesh mesh;
  std::map<std::pair<long long, long long>, int> vmap;
  auto vertex_id = [&](const Vec2& p) {
    const std::pair<long long, long long> key(std::llround(p.x() / snap),
                                              std::llround(p.y() / snap));
    auto it = vmap.find(key);
    if (it != vmap.end()) return it->second;
    const int id = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(p);
    vmap.emplace(key, id);
    return id;
  };
  for (const Polygon& p : cells) {
    std::vector<int> loop;
    for (const Vec2& v : p) {
      const int id = vertex_id(v);
      if (loop.empty() || loop.back() != id) loop.push_back(id);
    }
    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    mesh.cells.push_back(std::move(loop));
  }
  mesh.finalize();

  // Welding sanity: every boundary facet must lie on the domain boundary.
  for (const Facet& f : mesh.facets) {
    if (f.interior) continue;
    for (const Vec2& p : {mesh.vertices[f.v0], mesh.vertices[f.v1]}) {
      double dist = diam;
      for (size_t e = 0; e < domain.size(); ++e)
        dist = std::min(dist,
                        point_segment_distance(p, domain[e], domain[(e + 1) % domain.size()]));
      if (dist > 1e-8 * diam)
        throw std::runtime_error("generate_voronoi: boundary facet off the domain boundary");
    }
  }
  const double domain_area = polygon_signed_area(domain);
  if (std::abs(mesh.total_area() - domain_area) > 1e-10 * domain_area)
    throw std::runtime_error("generate_voronoi: cell areas do not tile the domain");
  return mesh;
}

}  // namespace

std::vector<Vec2> lloyd_sweep(const Polygon& domain, const std::vector<Vec2>& generators) {
  std::vector<Vec2> out(generators.size());
  std::vector<std::pair<double, int>> scratch;
  for (size_t i = 0; i < generators.size(); ++i)
    out[i] = polygon_centroid(voronoi_cell(domain, generators, static_cast<int>(i), scratch));
  return out;
}

double voronoi_energy(const Polygon& domain, const std::vector<Vec2>& generators) {
  double e = 0.0;
  std::vector<std::pair<double, int>> scratch;
  for (size_t i = 0; i < generators.size(); ++i)
    e += polygon_second_moment(voronoi_cell(domain, generators, static_cast<int>(i), scratch),
                               generators[i]);
  return e;
}

PolyMesh generate_voronoi(const Polygon& domain, int n_cells, int lloyd_iters, uint64_t seed) {
  if (n_cells < 1) throw std::runtime_error("generate_voronoi: need at least one cell");
  if (polygon_signed_area(domain) <= 0.0)
    throw std::runtime_error("generate_voronoi: domain must be a CCW convex polygon");
  const double dup_tol = 1e-12 * polygon_diameter(domain);

  std::string last_error = "unknown";
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * static_cast<uint64_t>(attempt));
    try {
      std::vector<Vec2> gen = draw_generators(domain, n_cells, rng);
      if (has_duplicates(gen, dup_tol)) throw std::runtime_error("duplicate generators");
      for (int it = 0; it < lloyd_iters; ++it) {
        gen = lloyd_sweep(domain, gen);
        if (has_duplicates(gen, dup_tol)) throw std::runtime_error("duplicate generators");
      }
      std::vector<Polygon> polys(n_cells);
      std::vector<std::pair<double, int>> scratch;
      for (int i = 0; i < n_cells; ++i) polys[i] = voronoi_cell(domain, gen, i, scratch);
      return build_mesh(domain, polys);
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  throw std::runtime_error(
      fmt::format("generate_voronoi: failed after 8 seed attempts, last error: {}", last_error));
}

}  // namespace fkldg
