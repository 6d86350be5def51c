#pragma once

#include "stokes/solver.hpp"

#include <string>
#include <utility>
#include <vector>

namespace stokes {

/// Legacy VTK ASCII output of a solved field: velocity vectors, pressure and
/// the viscous stress components (vertex-averaged over incident cells) as
/// point data on the P1 mesh.
void write_solution_vtk(const TriMesh& mesh, const DofMap& dofmap, const Solution& solution,
                        double mu, const std::string& path);

/// Plain key=value stability/report file for a solve.
void write_solution_report(const Solution& solution, const std::string& path,
                           const std::vector<std::pair<std::string, std::string>>& extra = {});

}  // namespace stokes
