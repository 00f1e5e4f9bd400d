// mesh_io.hpp
//
// Mesh files are JSON:
//   {
//     "vertices": [[x, y], ...],
//     "cells":    [[i0, i1, ...], ...],   0-based CCW loops
//     "labels":   [l0, l1, ...],          optional per-cell ints
//     "axonal":   [[ax, ay], ...]         optional per-cell fiber directions
//   }
#pragma once

#include "fkldg/polymesh.hpp"

#include <string>

namespace fkldg {

// Parses, validates and finalizes a mesh. Malformed input throws
// std::runtime_error with the offending entity named.
PolyMesh load_mesh(const std::string& path);

void save_mesh(const PolyMesh& mesh, const std::string& path);

}  // namespace fkldg
