#pragma once

#include "stokes/mesh.hpp"

#include <string>

namespace stokes {

/// Legacy VTK ASCII unstructured grid (POINTS, CELLS with triangle type 5).
void write_mesh_vtk(const TriMesh& mesh, const std::string& path);

/// Plain-text mesh format. First line: "<n_vertices> <n_triangles> <n_boundary_edges>",
/// then one "x y" line per vertex, one "i j k" line per triangle and one
/// "i j tag" line per boundary edge. All indices zero-based.
void write_mesh_text(const TriMesh& mesh, const std::string& path);
TriMesh read_mesh_text(const std::string& path);

}  // namespace stokes
