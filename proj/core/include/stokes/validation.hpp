#pragma once

#include "stokes/fields.hpp"
#include "stokes/solver.hpp"

#include <array>
#include <string>
#include <vector>

namespace stokes {

/// Channel geometry and data: (0,L) x (0,H), inlet/outlet pressures on the
/// lateral sides, constant viscosity.
struct ChannelParams {
  double L = 2.0;
  double H = 1.0;
  double p_in = 1.0;
  double p_out = 0.0;
  double mu = 1.0;
};

struct PoiseuilleState {
  Vec2 velocity;
  double pressure;
};

/// The classical channel solution: linear pressure drop and the parabolic
/// velocity profile it drives.
PoiseuilleState poiseuille(const Vec2& x, const ChannelParams& params);

/// Total stress of the Poiseuille pair applied to a unit normal, in closed
/// form: (-p I + 2 mu e(grad u)) n.
Vec2 poiseuille_traction(const Vec2& x, const Vec2& normal, const ChannelParams& params);

/// Normal stress data on the lateral sides: -p_in n at x1 = 0 and -p_out n
/// at x1 = L. Throws std::invalid_argument elsewhere.
Vec2 normal_stress_bc(const Vec2& x, const ChannelParams& params);

/// Mixed solve of the pressure-driven channel: no-slip walls, normal stress
/// on the lateral sides. The mirrored diagonal pattern keeps the mesh (and
/// hence the discrete solution) symmetric about the midplane.
struct ChannelSolve {
  TriMesh mesh;
  BoundaryPartition partition;
  DofMap dofmap;
  Solution solution;
};

ChannelSolve solve_normal_stress_channel(const ChannelParams& params, int nx, int ny,
                                         DiagonalPattern pattern = DiagonalPattern::mirrored,
                                         const SolverOptions& opts = {});

struct ComparisonSample {
  Vec2 x;
  Vec2 u;
  Vec2 u_ref;
  double p;
  double p_ref;
};

struct PoiseuilleComparison {
  std::vector<ComparisonSample> samples;
  double vel_l2_diff = 0.0;
  double vel_l2_rel = 0.0;
  double pre_l2_diff = 0.0;
  double pre_l2_rel = 0.0;
  /// L2 norm of p - p_ref over the left/middle/right thirds of the channel.
  std::array<double, 3> band_pressure_dev = {0.0, 0.0, 0.0};
  std::vector<std::array<double, 3>> centerline;  // x1, p(x1, H/2), p_ref
  std::vector<std::array<double, 3>> wall_shear;  // x1, 2 mu e_12 at y=0, reference
};

PoiseuilleComparison compare_to_poiseuille(const TriMesh& mesh, const DofMap& dofmap,
                                           const Solution& solution, const ChannelParams& params,
                                           int samples_x, int samples_y);

/// Sample table as CSV: x1, x2, u1, u2, p, u1_ref, u2_ref, p_ref.
void write_comparison_csv(const std::string& path, const PoiseuilleComparison& comparison);

struct AsymptoticRow {
  double H;
  std::string phi;  // "1", "y1", "y2", "y1y2"
  double moment_u;  // rescaled first velocity component moment
  double moment_p;
  double limit_u;
  double limit_p;
  double discrepancy_u;
  double discrepancy_p;
};

/// Thin-channel study: for each height solves the traction-driven channel
/// with g = -p(x) n on the lateral sides and compares the rescaled moments
/// (L/H^2 scaling on velocity) against the closed-form limit fields on the
/// unit square. The mesh policy keeps ny fixed and scales nx with L/H so
/// the rescaled element shape stays constant.
std::vector<AsymptoticRow> asymptotic_study(const std::vector<double>& heights,
                                            const ChannelParams& base, int ny,
                                            const SolverOptions& opts = {});

void write_asymptotics_csv(const std::string& path, const std::vector<AsymptoticRow>& rows);

}  // namespace stokes
