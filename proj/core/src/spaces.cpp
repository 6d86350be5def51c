#include "stokes/spaces.hpp"

#include <stdexcept>

namespace stokes {

DofMap::DofMap(const TriMesh& mesh, const BoundaryPartition& partition) {
  const int nv = mesh.n_vertices();
  const int ne = mesh.n_edges();
  n_pre_dofs_ = nv;

  velocity_nodes_.reserve(nv + ne);
  velocity_nodes_.assign(mesh.vertices().begin(), mesh.vertices().end());
  for (const Edge& e : mesh.edges()) {
    velocity_nodes_.push_back(0.5 * (mesh.vertices()[e.v0] + mesh.vertices()[e.v1]));
  }

  cell_nodes_.resize(mesh.n_triangles());
  cell_pressure_.resize(mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto& edges = mesh.triangle_edges(t);
    cell_nodes_[t] = {tri[0],        tri[1],        tri[2],
                      nv + edges[0], nv + edges[1], nv + edges[2]};
    cell_pressure_[t] = tri;
  }

  on_dirichlet_.assign(velocity_nodes_.size(), 0);
  for (const auto& be : mesh.boundary_edges()) {
    if (!partition.dirichlet_tags.count(be.tag)) continue;
    const Edge& e = mesh.edges()[be.edge];
    on_dirichlet_[e.v0] = 1;
    on_dirichlet_[e.v1] = 1;
    on_dirichlet_[nv + be.edge] = 1;
  }
  for (int n = 0; n < n_velocity_nodes(); ++n) {
    if (!on_dirichlet_[n]) continue;
    dirichlet_values_[velocity_dof(n, 0)] = 0.0;
    dirichlet_values_[velocity_dof(n, 1)] = 0.0;
  }
}

void DofMap::set_dirichlet_value(int dof, double value) {
  if (dof < 0 || dof >= n_vel_dofs()) {
    throw std::invalid_argument("DofMap::set_dirichlet_value: dof out of range");
  }
  dirichlet_values_[dof] = value;
  on_dirichlet_[dof / 2] = 1;
}

DofMap build_taylor_hood(const TriMesh& mesh, const BoundaryPartition& partition) {
  return DofMap(mesh, partition);
}

Eigen::VectorXd interpolate_dirichlet_values(const DofMap& dofmap, const VectorField& h) {
  Eigen::VectorXd values = Eigen::VectorXd::Zero(dofmap.n_vel_dofs());
  for (const auto& [dof, unused] : dofmap.dirichlet_values()) {
    const int node = dof / 2;
    const Vec2 v = h(dofmap.velocity_nodes()[node]);
    values[dof] = (dof % 2 == 0) ? v.x() : v.y();
  }
  return values;
}

void interpolate_boundary_velocity(DofMap& dofmap, const VectorField& h) {
  const Eigen::VectorXd values = interpolate_dirichlet_values(dofmap, h);
  // Copy the key set first: set_dirichlet_value mutates the map.
  std::vector<int> dofs;
  dofs.reserve(dofmap.dirichlet_values().size());
  for (const auto& [dof, unused] : dofmap.dirichlet_values()) dofs.push_back(dof);
  for (int dof : dofs) dofmap.set_dirichlet_value(dof, values[dof]);
}

RigidModes rigid_modes(const DofMap& dofmap) {
  RigidModes r;
  const int n = dofmap.n_vel_dofs();
  for (auto& m : r.modes) m = Eigen::VectorXd::Zero(n);
  for (int node = 0; node < dofmap.n_velocity_nodes(); ++node) {
    const Vec2& x = dofmap.velocity_nodes()[node];
    r.modes[0][DofMap::velocity_dof(node, 0)] = 1.0;
    r.modes[1][DofMap::velocity_dof(node, 1)] = 1.0;
    r.modes[2][DofMap::velocity_dof(node, 0)] = -x.y();
    r.modes[2][DofMap::velocity_dof(node, 1)] = x.x();
  }
  return r;
}

}  // namespace stokes
