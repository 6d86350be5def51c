#pragma once

#include "stokes/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <map>
#include <vector>

namespace stokes {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
/// Traction data evaluated at a boundary point with its outward unit normal.
using TractionField = std::function<Vec2(const Vec2&, const Vec2& normal, int tag)>;

/// Taylor-Hood P2/P1 degree-of-freedom layout. Velocity nodes are the mesh
/// vertices followed by the edge midpoints, two components per node
/// (dof = 2*node + component). Pressure nodes are the vertices.
class DofMap {
 public:
  DofMap(const TriMesh& mesh, const BoundaryPartition& partition);

  int n_velocity_nodes() const { return static_cast<int>(velocity_nodes_.size()); }
  int n_vel_dofs() const { return 2 * n_velocity_nodes(); }
  int n_pre_dofs() const { return n_pre_dofs_; }

  const std::vector<Vec2>& velocity_nodes() const { return velocity_nodes_; }

  /// Velocity nodes of cell t in reference order [v0 v1 v2 m12 m20 m01].
  const std::array<int, 6>& cell_velocity_nodes(int t) const { return cell_nodes_[t]; }
  /// Pressure dofs of cell t (its vertices).
  const std::array<int, 3>& cell_pressure_dofs(int t) const { return cell_pressure_[t]; }

  static int velocity_dof(int node, int component) { return 2 * node + component; }

  bool node_on_dirichlet(int node) const { return on_dirichlet_[node] != 0; }

  /// Constrained velocity dofs with their prescribed values (zero until
  /// interpolate_boundary_velocity is called).
  const std::map<int, double>& dirichlet_values() const { return dirichlet_values_; }

  /// Adds or overwrites a constraint. Intended for boundary interpolation
  /// and for constraint sets not expressible through edge tags.
  void set_dirichlet_value(int dof, double value);

 private:
  std::vector<Vec2> velocity_nodes_;
  std::vector<std::array<int, 6>> cell_nodes_;
  std::vector<std::array<int, 3>> cell_pressure_;
  std::vector<char> on_dirichlet_;
  std::map<int, double> dirichlet_values_;
  int n_pre_dofs_ = 0;
};

DofMap build_taylor_hood(const TriMesh& mesh, const BoundaryPartition& partition);

/// Nodal interpolation of h at every constrained node; the resulting full
/// velocity-length vector is zero on free dofs. Evaluation failures propagate.
Eigen::VectorXd interpolate_dirichlet_values(const DofMap& dofmap, const VectorField& h);

/// Stores the nodal interpolation of h as the constraint values of dofmap.
void interpolate_boundary_velocity(DofMap& dofmap, const VectorField& h);

/// Basis of the rigid-body velocities: translations e1, e2 and the rotation
/// (-y, x), interpolated on the P2 nodes.
struct RigidModes {
  std::array<Eigen::VectorXd, 3> modes;
};

RigidModes rigid_modes(const DofMap& dofmap);

}  // namespace stokes
