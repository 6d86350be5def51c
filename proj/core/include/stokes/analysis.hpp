#pragma once

#include "stokes/assembly.hpp"

#include <string>
#include <vector>

namespace stokes {

enum class Quantity { korn1, korn3, infsup, lambda1 };

const char* quantity_name(Quantity q);

struct ConstantReport {
  Quantity quantity;
  double value = 0.0;
  int mesh_level = 0;
  /// Field achieving the extremal Rayleigh quotient, embedded on the full
  /// dof set (zeros on constrained dofs). Velocity-space quantities fill
  /// extremal_velocity, the inf-sup constant fills extremal_pressure.
  Eigen::VectorXd extremal_velocity;
  Eigen::VectorXd extremal_pressure;
  /// Number of pressure modes excluded before the eigensolve (the constant
  /// pressure in the pure Dirichlet regime).
  int excluded_zero_modes = 0;
  /// || B^T 1 || relative to ||B||, the detector for that constant mode.
  double zero_mode_residual = 0.0;
  int iterations = 0;
};

/// Best constant in ||v||_H1 <= K ||e(grad v)||_L2 over the constrained
/// velocity space, via the smallest generalized eigenvalue of the
/// strain-energy and H1 Gram matrices. Requires a Dirichlet part of
/// positive measure (the constant is infinite otherwise).
ConstantReport korn_constant(const TriMesh& mesh, const DofMap& dofmap,
                             const BoundaryPartition& partition, int level = 0);

/// Best constant in ||grad v|| <= K (||v||^2 + ||e(grad v)||^2)^{1/2} over
/// the unconstrained velocity space (largest eigenvalue of the gradient
/// Gram against mass + strain energy).
ConstantReport korn_first_constant(const TriMesh& mesh, const DofMap& dofmap, int level = 0);

/// Smallest eigenvalue of the strain-energy form on the discretely
/// divergence-free constrained subspace, normalized in L2.
ConstantReport lambda1(const TriMesh& mesh, const DofMap& dofmap,
                       const BoundaryPartition& partition, int level = 0);

/// Discrete inf-sup constant: beta^2 is the smallest eigenvalue of the
/// pressure Schur complement B A_{H1}^{-1} B^T against the pressure mass.
/// With a Neumann part present the full pressure space is used; in the pure
/// Dirichlet regime the constant-pressure kernel is detected, excluded, and
/// reported via excluded_zero_modes.
ConstantReport infsup_constant(const TriMesh& mesh, const DofMap& dofmap,
                               const BoundaryPartition& partition, int level = 0);

struct RigidKernel {
  int dimension = 0;
  std::vector<Eigen::VectorXd> basis;  // full dof set, zeros on constrained dofs
};

/// Dimension and basis of the strain-energy kernel within the constrained
/// velocity space (dense eigendecomposition; intended for coarse meshes).
RigidKernel rigid_kernel(const TriMesh& mesh, const DofMap& dofmap);

struct BogovskiiResult {
  Eigen::VectorXd u;  // full velocity dofs, zero trace on the Dirichlet set
  double u_h1 = 0.0;
  double f_l2 = 0.0;
  double bound = 0.0;  // u_h1 / f_l2, zero for f == 0
};

/// Minimum-H1-norm velocity with weak divergence equal to f and zero trace
/// on the Dirichlet set. In the pure Dirichlet regime f must have zero mean
/// (IncompatibleDataError otherwise).
BogovskiiResult bogovskii_solve(const TriMesh& mesh, const DofMap& dofmap,
                                const BoundaryPartition& partition, const ScalarField& f);

/// Discretely divergence-free field with trace h on the Dirichlet set: a
/// nodal lift corrected by a Bogovskii solve of its divergence.
Eigen::VectorXd lift_divergence_free(const TriMesh& mesh, const DofMap& dofmap,
                                     const BoundaryPartition& partition, const VectorField& h);

struct ConstantRow {
  int level;
  double h_max;
  Quantity quantity;
  double value;
};

void write_constants_csv(const std::string& path, const std::vector<ConstantRow>& rows);

}  // namespace stokes
