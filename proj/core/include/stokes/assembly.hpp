#pragma once

#include "stokes/spaces.hpp"

#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace stokes {

using SparseMat = Eigen::SparseMatrix<double>;

/// Viscous block: entries of 2*mu * int e(grad u) : e(grad v) dx over all
/// velocity dofs, constraints not applied. Symmetric positive semidefinite.
/// Throws std::invalid_argument for mu <= 0.
SparseMat assemble_viscous(const TriMesh& mesh, const DofMap& dofmap, double mu);

/// Divergence block B with b(v, q) = -int q div v dx; shape n_pre x n_vel.
SparseMat assemble_divergence(const TriMesh& mesh, const DofMap& dofmap);

SparseMat velocity_mass_matrix(const TriMesh& mesh, const DofMap& dofmap);
/// Gram matrix of the full velocity gradient, int grad u : grad v dx.
SparseMat velocity_gradient_matrix(const TriMesh& mesh, const DofMap& dofmap);
/// H1 Gram matrix: mass + gradient.
SparseMat velocity_h1_matrix(const TriMesh& mesh, const DofMap& dofmap);
SparseMat pressure_mass_matrix(const TriMesh& mesh, const DofMap& dofmap);

struct LoadVectors {
  Eigen::VectorXd rhs_vel;  // int_{Gamma_N} g.phi dS - int_Omega f.phi dx
  Eigen::VectorXd rhs_pre;  // zero before lifting
};

/// Load vectors for the convention a(u,v) + b(v,p) = <g,v> - (f,v),
/// b(u,q) = 0. Null fields are treated as zero data.
LoadVectors assemble_loads(const TriMesh& mesh, const DofMap& dofmap,
                           const BoundaryPartition& partition, const VectorField& f,
                           const TractionField& g);

/// Assembled saddle-point problem. A and B live on the full dof set;
/// apply_dirichlet_lift produces the reduced blocks on free dofs together
/// with the reconstruction data.
struct SaddleSystem {
  SparseMat A;
  SparseMat B;
  Eigen::VectorXd rhs_vel;
  Eigen::VectorXd rhs_pre;
  Regime regime = Regime::mixed;
  double mu = 1.0;
  SparseMat pressure_mass;  // used by the Krylov preconditioner

  bool eliminated = false;
  std::vector<int> free_dofs;
  std::vector<int> full_to_free;   // -1 on constrained dofs
  Eigen::VectorXd prescribed;      // full length, zero on free dofs
  SparseMat A_ff;                  // nf x nf
  SparseMat B_f;                   // n_pre x nf
  Eigen::VectorXd rhs_vel_f;
  Eigen::VectorXd rhs_pre_f;

  // Lagrange-multiplier pinning rows: functionals over the free velocity
  // dofs (rigid-mode orthogonality) and over the pressure dofs (zero mean).
  std::vector<Eigen::VectorXd> velocity_pins;
  std::vector<Eigen::VectorXd> pressure_pins;

  int n_free() const { return static_cast<int>(free_dofs.size()); }
};

SaddleSystem assemble_system(const TriMesh& mesh, const DofMap& dofmap,
                             const BoundaryPartition& partition, double mu,
                             const VectorField& f, const TractionField& g);

/// Symmetric elimination of the constrained dofs: removes their rows and
/// columns and moves A*u_c and B*u_c to the right-hand sides.
void apply_dirichlet_lift(SaddleSystem& system, const DofMap& dofmap);

/// Full velocity vector from the free part plus the prescribed values.
Eigen::VectorXd reconstruct_velocity(const SaddleSystem& system, const Eigen::VectorXd& u_free);

/// 2*mu * int |e(grad u_h)|^2 dx evaluated cell by cell at quadrature points.
/// A sum of squares, so rigid fields evaluate to zero without cancellation.
double energy_seminorm_sq(const TriMesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& u,
                          double mu);

/// Free velocity dofs (ascending) and the inverse map, -1 on constrained dofs.
struct FreeDofMaps {
  std::vector<int> free;
  std::vector<int> full_to_free;
};
FreeDofMaps free_dof_maps(const DofMap& dofmap);

SparseMat slice_columns(const SparseMat& m, const std::vector<int>& full_to_free, int n_free);
SparseMat slice_rows_columns(const SparseMat& m, const std::vector<int>& full_to_free, int n_free);

/// MatrixMarket coordinate format, for external verification.
void write_matrix_market(const SparseMat& m, const std::string& path);

}  // namespace stokes
