#pragma once

#include <Eigen/Dense>

#include <array>

namespace stokes {

using Vec2 = Eigen::Vector2d;

// Reference triangle with barycentric coordinates (l0, l1, l2), l0 = 1-l1-l2.
// Local node order: 0,1,2 vertices; 3 = midpoint(1,2); 4 = midpoint(2,0);
// 5 = midpoint(0,1).

inline std::array<double, 3> p1_values(double l1, double l2) {
  return {1.0 - l1 - l2, l1, l2};
}

/// Gradients with respect to the reference coordinates (l1, l2).
inline std::array<Vec2, 3> p1_ref_gradients() {
  return {Vec2(-1.0, -1.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
}

inline std::array<double, 6> p2_values(double l1, double l2) {
  const double l0 = 1.0 - l1 - l2;
  return {l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0),
          4.0 * l1 * l2,         4.0 * l2 * l0,         4.0 * l0 * l1};
}

inline std::array<Vec2, 6> p2_ref_gradients(double l1, double l2) {
  const double l0 = 1.0 - l1 - l2;
  return {Vec2(1.0 - 4.0 * l0, 1.0 - 4.0 * l0),
          Vec2(4.0 * l1 - 1.0, 0.0),
          Vec2(0.0, 4.0 * l2 - 1.0),
          Vec2(4.0 * l2, 4.0 * l1),
          Vec2(-4.0 * l2, 4.0 * (l0 - l2)),
          Vec2(4.0 * (l0 - l1), -4.0 * l1)};
}

/// One-dimensional quadratic trace basis on an edge, s in [0,1]:
/// values of the two endpoint nodes and the midpoint node.
inline std::array<double, 3> p2_edge_values(double s) {
  return {(1.0 - s) * (1.0 - 2.0 * s), s * (2.0 * s - 1.0), 4.0 * s * (1.0 - s)};
}

}  // namespace stokes
