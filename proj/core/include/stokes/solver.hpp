#pragma once

#include "stokes/assembly.hpp"
#include "stokes/errors.hpp"

#include <array>

namespace stokes {

/// Full data of the boundary value problem. Null fields mean zero data;
/// g is only evaluated on Neumann-tagged edges, h only at Dirichlet nodes.
struct StokesProblem {
  const TriMesh& mesh;
  BoundaryPartition partition;
  double mu = 1.0;
  VectorField f;
  TractionField g;
  VectorField h;
};

enum class SolveMethod { automatic, direct, minres };

struct SolverOptions {
  double tol = 1e-10;  // relative residual target
  SolveMethod method = SolveMethod::automatic;
  int max_iterations = 0;  // iterative cap; 0 picks a default
};

struct StabilityReport {
  double u_h1 = 0.0;
  double p_l2 = 0.0;
  double f_l2 = 0.0;
  double g_l2 = 0.0;       // L2 over the Neumann part
  double h_lift_h1 = 0.0;  // H1 norm of the nodal Dirichlet lift
  double data_norm = 0.0;
  double ratio = 0.0;  // (2 mu ||u||_H1 + ||p||_L2) / data_norm
};

struct Solution {
  Eigen::VectorXd u;  // full velocity dof vector, prescribed values included
  Eigen::VectorXd p;
  Regime regime = Regime::mixed;
  double residual_norm = 0.0;  // relative residual of the solved block system
  double div_residual = 0.0;   // ||B u - rhs_pre|| on the full dof set
  StabilityReport stability;
};

/// Mixed regime: both boundary measures positive, no compatibility condition
/// and no pinning. Unique velocity and pressure.
Solution solve(const StokesProblem& problem, const SolverOptions& opts = {});

/// Pure Dirichlet regime. Requires zero net boundary flux of h; the pressure
/// is pinned to zero mean. Throws IncompatibleDataError when the flux
/// condition fails.
Solution solve_dirichlet(const StokesProblem& problem, const SolverOptions& opts = {});

/// Pure Neumann regime. Requires f and g to balance against every rigid
/// mode; the velocity is pinned H1-orthogonal to the rigid modes. Throws
/// IncompatibleDataError with the three defect values otherwise.
Solution solve_neumann(const StokesProblem& problem, const SolverOptions& opts = {});

/// Dispatches on the partition's regime.
Solution solve_problem(const StokesProblem& problem, const SolverOptions& opts = {});

struct SuperpositionCheck {
  double u_h1_discrepancy = 0.0;
  double p_l2_discrepancy = 0.0;
};

/// Solves the three single-datum sub-problems (f alone, g alone, h alone)
/// and the combined problem; returns the norms of u - (u_f+u_g+u_h) and
/// p - (p_f+p_g+p_h). Mixed regime only.
SuperpositionCheck superposition_check(const StokesProblem& problem,
                                       const SolverOptions& opts = {});

struct LinearSolveResult {
  Eigen::VectorXd u_free;
  Eigen::VectorXd p;
  Eigen::VectorXd multipliers;
  double residual = 0.0;  // relative
  int iterations = 0;     // 0 on the direct path
};

/// Solves the eliminated block system [[A, B^T], [B, 0]] with the system's
/// pinning rows appended as Lagrange multipliers. Deterministic for fixed
/// inputs. Throws NumericalBreakdownError on singular factorization,
/// non-finite results, or an exceeded iteration cap.
LinearSolveResult linear_solve(const SaddleSystem& system, const SolverOptions& opts = {});

/// Net boundary flux int_{boundary} h.n dS by order-5 edge quadrature
/// (the Dirichlet-regime compatibility quantity).
double dirichlet_flux(const TriMesh& mesh, const VectorField& h);

/// Force/torque imbalance int f.r dx - int g.r dS against the rigid modes
/// (e1, e2, rotation), the Neumann-regime compatibility quantities.
std::array<double, 3> neumann_defects(const TriMesh& mesh, const BoundaryPartition& partition,
                                      const VectorField& f, const TractionField& g);

}  // namespace stokes
