#pragma once

#include "stokes/spaces.hpp"

#include <Eigen/Dense>

namespace stokes {

/// Brute-force point location with a small barycentric tolerance; returns the
/// first containing triangle or -1.
int locate_triangle(const TriMesh& mesh, const Vec2& x, double tol = 1e-10);

/// P2 velocity evaluation at an arbitrary point of the closed domain.
/// Throws std::invalid_argument if x lies outside every triangle.
Vec2 evaluate_velocity(const TriMesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& u,
                       const Vec2& x);

/// Velocity gradient (d u_i / d x_j) at a point, taken inside the containing
/// triangle (one-sided on element interfaces).
Eigen::Matrix2d evaluate_velocity_gradient(const TriMesh& mesh, const DofMap& dofmap,
                                           const Eigen::VectorXd& u, const Vec2& x);

/// P1 pressure evaluation.
double evaluate_pressure(const TriMesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& p,
                         const Vec2& x);

}  // namespace stokes
