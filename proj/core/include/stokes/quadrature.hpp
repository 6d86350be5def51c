#pragma once

#include <array>
#include <span>

namespace stokes {

/// Quadrature point on the reference triangle in barycentric coordinates.
/// Weights sum to one; integrals scale by the physical triangle area.
struct TriQuadPoint {
  double l0, l1, l2;
  double weight;
};

/// Six-point rule, exact for polynomials up to degree 4. All volume terms in
/// the Taylor-Hood assembly (P2 x P2 products, degree <= 4) are integrated
/// exactly by this rule.
std::span<const TriQuadPoint> triangle_quadrature_degree4();

/// Gauss-Legendre nodes/weights on [-1, 1], n in 1..5 points
/// (exact for polynomial degree 2n-1). Throws std::invalid_argument otherwise.
std::span<const double> gauss_legendre_nodes(int n);
std::span<const double> gauss_legendre_weights(int n);

}  // namespace stokes
