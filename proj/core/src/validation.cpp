#include "stokes/validation.hpp"

#include "stokes/elements.hpp"
#include "stokes/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace stokes {

namespace {

double pressure_ref(const Vec2& x, const ChannelParams& c) {
  return c.p_out * x.x() / c.L + c.p_in * (1.0 - x.x() / c.L);
}

/// Off-diagonal viscous stress of the Poiseuille pair, 2 mu e_12.
double shear_ref(const Vec2& x, const ChannelParams& c) {
  return (c.H - 2.0 * x.y()) * (c.p_in - c.p_out) / (2.0 * c.L);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

PoiseuilleState poiseuille(const Vec2& x, const ChannelParams& c) {
  const Vec2 grad_p((c.p_out - c.p_in) / c.L, 0.0);
  PoiseuilleState state;
  state.velocity = -x.y() * (c.H - x.y()) / (2.0 * c.mu) * grad_p;
  state.pressure = pressure_ref(x, c);
  return state;
}

Vec2 poiseuille_traction(const Vec2& x, const Vec2& normal, const ChannelParams& c) {
  const double tau = shear_ref(x, c);
  const double p = pressure_ref(x, c);
  // sigma = [[-p, tau], [tau, -p]]
  return Vec2(-p * normal.x() + tau * normal.y(), tau * normal.x() - p * normal.y());
}

Vec2 normal_stress_bc(const Vec2& x, const ChannelParams& c) {
  const double tol = 1e-12 * c.L;
  if (std::abs(x.x()) <= tol) return Vec2(c.p_in, 0.0);        // -p_in * (-1, 0)
  if (std::abs(x.x() - c.L) <= tol) return Vec2(-c.p_out, 0.0);  // -p_out * (1, 0)
  throw std::invalid_argument("normal_stress_bc: point is not on a lateral side");
}

ChannelSolve solve_normal_stress_channel(const ChannelParams& params, int nx, int ny,
                                         DiagonalPattern pattern, const SolverOptions& opts) {
  TriMesh mesh = build_rect_mesh(params.L, params.H, nx, ny, pattern);
  BoundaryPartition partition = partition_boundary(mesh, {3, 4});
  const TractionField g = [params](const Vec2&, const Vec2& n, int tag) {
    return tag == 1 ? Vec2(-params.p_in * n.x(), -params.p_in * n.y())
                    : Vec2(-params.p_out * n.x(), -params.p_out * n.y());
  };
  const StokesProblem problem{mesh, partition, params.mu, nullptr, g, nullptr};
  Solution solution = solve(problem, opts);
  DofMap dofmap = build_taylor_hood(mesh, partition);
  return ChannelSolve{std::move(mesh), std::move(partition), std::move(dofmap),
                      std::move(solution)};
}

PoiseuilleComparison compare_to_poiseuille(const TriMesh& mesh, const DofMap& dofmap,
                                           const Solution& solution, const ChannelParams& params,
                                           int samples_x, int samples_y) {
  PoiseuilleComparison cmp;

  for (int j = 0; j <= samples_y; ++j) {
    for (int i = 0; i <= samples_x; ++i) {
      const Vec2 x(params.L * i / samples_x, params.H * j / samples_y);
      ComparisonSample s;
      s.x = x;
      s.u = evaluate_velocity(mesh, dofmap, solution.u, x);
      s.p = evaluate_pressure(mesh, dofmap, solution.p, x);
      const PoiseuilleState ref = poiseuille(x, params);
      s.u_ref = ref.velocity;
      s.p_ref = ref.pressure;
      cmp.samples.push_back(s);
    }
  }

  // Field differences and the banded pressure deviation by quadrature.
  double vel_diff = 0.0, vel_ref = 0.0, pre_diff = 0.0, pre_ref = 0.0;
  std::array<double, 3> bands = {0.0, 0.0, 0.0};
  const auto rule = triangle_quadrature_degree4();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Vec2& a = mesh.vertices()[tri[0]];
    const Vec2& b = mesh.vertices()[tri[1]];
    const Vec2& c = mesh.vertices()[tri[2]];
    const auto& vnodes = dofmap.cell_velocity_nodes(t);
    const auto& pnodes = dofmap.cell_pressure_dofs(t);
    for (const auto& rp : rule) {
      const Vec2 x = rp.l0 * a + rp.l1 * b + rp.l2 * c;
      const double w = rp.weight * mesh.triangle_area(t);
      const auto n2 = p2_values(rp.l1, rp.l2);
      const auto n1 = p1_values(rp.l1, rp.l2);
      Vec2 uh = Vec2::Zero();
      for (int k = 0; k < 6; ++k) {
        uh.x() += n2[k] * solution.u[DofMap::velocity_dof(vnodes[k], 0)];
        uh.y() += n2[k] * solution.u[DofMap::velocity_dof(vnodes[k], 1)];
      }
      const double ph = n1[0] * solution.p[pnodes[0]] + n1[1] * solution.p[pnodes[1]] +
                        n1[2] * solution.p[pnodes[2]];
      const PoiseuilleState ref = poiseuille(x, params);
      vel_diff += w * (uh - ref.velocity).squaredNorm();
      vel_ref += w * ref.velocity.squaredNorm();
      const double dp = ph - ref.pressure;
      pre_diff += w * dp * dp;
      pre_ref += w * ref.pressure * ref.pressure;
      const int band = std::min(2, static_cast<int>(3.0 * x.x() / params.L));
      bands[band] += w * dp * dp;
    }
  }
  cmp.vel_l2_diff = std::sqrt(vel_diff);
  cmp.vel_l2_rel = vel_ref > 0.0 ? std::sqrt(vel_diff / vel_ref) : 0.0;
  cmp.pre_l2_diff = std::sqrt(pre_diff);
  cmp.pre_l2_rel = pre_ref > 0.0 ? std::sqrt(pre_diff / pre_ref) : 0.0;
  for (int k = 0; k < 3; ++k) cmp.band_pressure_dev[k] = std::sqrt(bands[k]);

  for (int i = 0; i <= samples_x; ++i) {
    const Vec2 x(params.L * i / samples_x, 0.5 * params.H);
    cmp.centerline.push_back(
        {x.x(), evaluate_pressure(mesh, dofmap, solution.p, x), pressure_ref(x, params)});
  }
  for (int i = 0; i <= samples_x; ++i) {
    const Vec2 x(params.L * i / samples_x, 0.0);
    const Eigen::Matrix2d grad = evaluate_velocity_gradient(mesh, dofmap, solution.u, x);
    const double shear = params.mu * (grad(0, 1) + grad(1, 0));
    cmp.wall_shear.push_back({x.x(), shear, shear_ref(x, params)});
  }
  return cmp;
}

void write_comparison_csv(const std::string& path, const PoiseuilleComparison& comparison) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "x1,x2,u1,u2,p,u1_ref,u2_ref,p_ref\n";
  for (const auto& s : comparison.samples) {
    out << num(s.x.x()) << ',' << num(s.x.y()) << ',' << num(s.u.x()) << ',' << num(s.u.y())
        << ',' << num(s.p) << ',' << num(s.u_ref.x()) << ',' << num(s.u_ref.y()) << ','
        << num(s.p_ref) << '\n';
  }
}

namespace {

double phi_value(const std::string& phi, const Vec2& y) {
  if (phi == "1") return 1.0;
  if (phi == "y1") return y.x();
  if (phi == "y2") return y.y();
  if (phi == "y1y2") return y.x() * y.y();
  throw std::invalid_argument("unknown test function " + phi);
}

// Integrals of the limit fields against phi over the unit square, by tensor
// Gauss quadrature (exact for these polynomial integrands).
std::pair<double, double> limit_moments(const std::string& phi, const ChannelParams& base) {
  const auto nodes = gauss_legendre_nodes(4);
  const auto weights = gauss_legendre_weights(4);
  double mu_u = 0.0, mu_p = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Vec2 y(0.5 * (nodes[i] + 1.0), 0.5 * (nodes[j] + 1.0));
      const double w = 0.25 * weights[i] * weights[j];
      const double u0 = y.y() * (1.0 - y.y()) * (base.p_in - base.p_out) / (2.0 * base.mu);
      const double p0 = base.p_out * y.x() + base.p_in * (1.0 - y.x());
      mu_u += w * u0 * phi_value(phi, y);
      mu_p += w * p0 * phi_value(phi, y);
    }
  }
  return {mu_u, mu_p};
}

}  // namespace

std::vector<AsymptoticRow> asymptotic_study(const std::vector<double>& heights,
                                            const ChannelParams& base, int ny,
                                            const SolverOptions& opts) {
  if (heights.empty()) throw std::invalid_argument("asymptotic_study: empty height list");
  for (std::size_t k = 0; k < heights.size(); ++k) {
    if (!(heights[k] > 0.0) || (k > 0 && heights[k] >= heights[k - 1])) {
      throw std::invalid_argument("asymptotic_study: heights must be positive and decreasing");
    }
  }
  const std::array<std::string, 4> phis = {"1", "y1", "y2", "y1y2"};

  std::vector<AsymptoticRow> rows;
  for (double H : heights) {
    ChannelParams params = base;
    params.H = H;
    const int nx = std::max(1, static_cast<int>(std::lround(ny * params.L / H)));
    TriMesh mesh = build_rect_mesh(params.L, H, nx, ny);
    BoundaryPartition partition = partition_boundary(mesh, {3, 4});
    const TractionField g = [params](const Vec2& x, const Vec2& n, int) {
      const double p = pressure_ref(x, params);
      return Vec2(-p * n.x(), -p * n.y());
    };
    const StokesProblem problem{mesh, partition, params.mu, nullptr, g, nullptr};
    const Solution sol = solve(problem, opts);
    const DofMap dofmap = build_taylor_hood(mesh, partition);

    const double area = mesh.total_area();
    const double vel_scale = params.L / (H * H);
    const auto rule = triangle_quadrature_degree4();
    for (const auto& phi : phis) {
      double mom_u = 0.0, mom_p = 0.0;
      for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles()[t];
        const Vec2& a = mesh.vertices()[tri[0]];
        const Vec2& b = mesh.vertices()[tri[1]];
        const Vec2& c = mesh.vertices()[tri[2]];
        const auto& vnodes = dofmap.cell_velocity_nodes(t);
        const auto& pnodes = dofmap.cell_pressure_dofs(t);
        for (const auto& rp : rule) {
          const Vec2 x = rp.l0 * a + rp.l1 * b + rp.l2 * c;
          const double w = rp.weight * mesh.triangle_area(t);
          const auto n2 = p2_values(rp.l1, rp.l2);
          const auto n1 = p1_values(rp.l1, rp.l2);
          double u1 = 0.0;
          for (int k = 0; k < 6; ++k) {
            u1 += n2[k] * sol.u[DofMap::velocity_dof(vnodes[k], 0)];
          }
          const double ph = n1[0] * sol.p[pnodes[0]] + n1[1] * sol.p[pnodes[1]] +
                            n1[2] * sol.p[pnodes[2]];
          const double pv = phi_value(phi, Vec2(x.x() / params.L, x.y() / H));
          mom_u += w * vel_scale * u1 * pv;
          mom_p += w * ph * pv;
        }
      }
      mom_u /= area;
      mom_p /= area;
      const auto [lim_u, lim_p] = limit_moments(phi, params);
      rows.push_back(AsymptoticRow{H, phi, mom_u, mom_p, lim_u, lim_p,
                                   std::abs(mom_u - lim_u), std::abs(mom_p - lim_p)});
    }
  }
  return rows;
}

void write_asymptotics_csv(const std::string& path, const std::vector<AsymptoticRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "H,phi,moment_u,moment_p,limit_u,limit_p,discrepancy_u,discrepancy_p\n";
  for (const auto& r : rows) {
    out << num(r.H) << ',' << r.phi << ',' << num(r.moment_u) << ',' << num(r.moment_p) << ','
        << num(r.limit_u) << ',' << num(r.limit_p) << ',' << num(r.discrepancy_u) << ','
        << num(r.discrepancy_p) << '\n';
  }
}

}  // namespace stokes
