// polymesh.hpp
//
// Conforming polygonal meshes: cells are simple CCW polygons, facets are the
// shared edges. Provides clipped Voronoi generation with Lloyd relaxation and
// the facet-wise mesh-size function used by the jump penalization.
#pragma once

#include "fkldg/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fkldg {

struct Facet {
  int v0 = -1, v1 = -1;   // endpoint vertex indices
  int k1 = -1, k2 = -1;   // adjacent cells, k1 < k2 for interior, k2 = -1 on the boundary
  Vec2 normal;            // unit normal pointing from k1 into k2 (outward on the boundary)
  double length = 0.0;
  bool interior = false;
};

class PolyMesh {
 public:
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cells;  // CCW vertex loops
  std::vector<int> labels;              // per-cell region label, all zero when absent
  std::vector<Vec2> axonal;             // optional per-cell fiber direction, may be empty

  std::vector<Facet> facets;
  std::vector<std::vector<int>> cell_facets;  // facet indices around each cell

  std::vector<double> cell_areas;
  std::vector<Vec2> cell_centroids;
  std::vector<double> cell_diameters;  // max pairwise vertex distance

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_interior_facets() const;
  double mesh_size() const;  // max cell diameter
  double total_area() const;

  Polygon cell_polygon(int k) const;
  int cell_edge_count(int k) const { return static_cast<int>(cells[k].size()); }

  // Facet-wise mesh size
  //   h(F) = eta_F^{-1} * [ (a1^theta + a2^theta) / 2 ]^{1/theta},
  //   a_i  = |K_i| / (m_i |F|),
  // where m_i is the edge count of K_i when use_facet_count is set and 1
  // otherwise. Interior facets only.
  double mesh_size_on_facet(int facet, double theta, double eta_F,
                            bool use_facet_count = true) const;

  // Derives facets, per-cell measures and adjacency from vertices/cells and
  // checks mesh validity (simple CCW cells, conforming facets, area match
  // between the cell partition and the region enclosed by boundary facets).
  // Throws std::runtime_error naming the offending cell on invalid input.
  void finalize();
};

// Clipped Voronoi tessellation of a convex CCW domain polygon from `n_cells`
// generators drawn uniformly (deterministic in `seed`), followed by
// `lloyd_iters` Lloyd sweeps moving each generator to its cell centroid.
// Degenerate generator configurations are retried with a perturbed draw a
// bounded number of times before failing.
PolyMesh generate_voronoi(const Polygon& domain, int n_cells, int lloyd_iters, uint64_t seed);

// Centroidal energy sum_i int_{V_i} |x - g_i|^2 of a generator set against
// its clipped Voronoi diagram; Lloyd sweeps never increase it.
double voronoi_energy(const Polygon& domain, const std::vector<Vec2>& generators);

// One Lloyd sweep: returns the centroids of the clipped Voronoi cells.
std::vector<Vec2> lloyd_sweep(const Polygon& domain, const std::vector<Vec2>& generators);

}  // namespace fkldg
