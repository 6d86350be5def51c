#include "stokes/quadrature.hpp"

#include <stdexcept>

namespace stokes {

namespace {

// Dunavant degree-4 rule: two orbits of three points each.
constexpr double kA1 = 0.445948490915965;
constexpr double kW1 = 0.223381589678011;
constexpr double kA2 = 0.091576213509771;
constexpr double kW2 = 0.109951743655322;

constexpr std::array<TriQuadPoint, 6> kTriDegree4 = {{
    {1.0 - 2.0 * kA1, kA1, kA1, kW1},
    {kA1, 1.0 - 2.0 * kA1, kA1, kW1},
    {kA1, kA1, 1.0 - 2.0 * kA1, kW1},
    {1.0 - 2.0 * kA2, kA2, kA2, kW2},
    {kA2, 1.0 - 2.0 * kA2, kA2, kW2},
    {kA2, kA2, 1.0 - 2.0 * kA2, kW2},
}};

constexpr std::array<double, 1> kGL1n = {0.0};
constexpr std::array<double, 1> kGL1w = {2.0};
constexpr std::array<double, 2> kGL2n = {-0.5773502691896257, 0.5773502691896257};
constexpr std::array<double, 2> kGL2w = {1.0, 1.0};
constexpr std::array<double, 3> kGL3n = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGL3w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
constexpr std::array<double, 4> kGL4n = {-0.8611363115940526, -0.3399810435848563,
                                         0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGL4w = {0.3478548451374538, 0.6521451548625461,
                                         0.6521451548625461, 0.3478548451374538};
constexpr std::array<double, 5> kGL5n = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                         0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGL5w = {0.2369268850561891, 0.4786286704993665,
                                         0.5688888888888889, 0.4786286704993665,
                                         0.2369268850561891};

}  // namespace

std::span<const TriQuadPoint> triangle_quadrature_degree4() { return kTriDegree4; }

std::span<const double> gauss_legendre_nodes(int n) {
  switch (n) {
    case 1: return kGL1n;
    case 2: return kGL2n;
    case 3: return kGL3n;
    case 4: return kGL4n;
    case 5: return kGL5n;
    default: throw std::invalid_argument("gauss_legendre_nodes: order must be in 1..5");
  }
}

std::span<const double> gauss_legendre_weights(int n) {
  switch (n) {
    case 1: return kGL1w;
    case 2: return kGL2w;
    case 3: return kGL3w;
    case 4: return kGL4w;
    case 5: return kGL5w;
    default: throw std::invalid_argument("gauss_legendre_weights: order must be in 1..5");
  }
}

}  // namespace stokes
