#include "stokes/solution_io.hpp"

#include "stokes/elements.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace stokes {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_solution_vtk(const TriMesh& mesh, const DofMap& dofmap, const Solution& solution,
                        double mu, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);

  const int nv = mesh.n_vertices();
  out << "# vtk DataFile Version 3.0\n";
  out << "stokes solution\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const auto& v : mesh.vertices()) out << num(v.x()) << ' ' << num(v.y()) << " 0\n";
  out << "CELLS " << mesh.n_triangles() << ' ' << 4 * mesh.n_triangles() << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.n_triangles() << '\n';
  for (int t = 0; t < mesh.n_triangles(); ++t) out << "5\n";

  // Viscous stress 2 mu e(grad u) is cell-wise linear and discontinuous;
  // average over the cells incident to each vertex.
  std::vector<Eigen::Matrix2d> stress(nv, Eigen::Matrix2d::Zero());
  std::vector<int> incident(nv, 0);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Vec2& a = mesh.vertices()[tri[0]];
    const Vec2& b = mesh.vertices()[tri[1]];
    const Vec2& c = mesh.vertices()[tri[2]];
    const double det = 2.0 * mesh.triangle_area(t);
    Eigen::Matrix2d jinv_t;
    jinv_t << (c.y() - a.y()) / det, (a.y() - b.y()) / det,
        (a.x() - c.x()) / det, (b.x() - a.x()) / det;
    const auto& nodes = dofmap.cell_velocity_nodes(t);
    const std::array<std::pair<double, double>, 3> corners = {{{0, 0}, {1, 0}, {0, 1}}};
    for (int k = 0; k < 3; ++k) {
      const auto ref = p2_ref_gradients(corners[k].first, corners[k].second);
      Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
      for (int m = 0; m < 6; ++m) {
        const Vec2 g = jinv_t * ref[m];
        const double ux = solution.u[DofMap::velocity_dof(nodes[m], 0)];
        const double uy = solution.u[DofMap::velocity_dof(nodes[m], 1)];
        grad(0, 0) += ux * g.x();
        grad(0, 1) += ux * g.y();
        grad(1, 0) += uy * g.x();
        grad(1, 1) += uy * g.y();
      }
      stress[tri[k]] += mu * (grad + grad.transpose());
      ++incident[tri[k]];
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (incident[v] > 0) stress[v] /= incident[v];
  }

  out << "POINT_DATA " << nv << '\n';
  out << "VECTORS velocity double\n";
  for (int v = 0; v < nv; ++v) {
    out << num(solution.u[DofMap::velocity_dof(v, 0)]) << ' '
        << num(solution.u[DofMap::velocity_dof(v, 1)]) << " 0\n";
  }
  out << "SCALARS pressure double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int v = 0; v < nv; ++v) out << num(solution.p[v]) << '\n';
  const char* names[3] = {"viscous_stress_xx", "viscous_stress_xy", "viscous_stress_yy"};
  const std::array<std::pair<int, int>, 3> ij = {{{0, 0}, {0, 1}, {1, 1}}};
  for (int comp = 0; comp < 3; ++comp) {
    out << "SCALARS " << names[comp] << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int v = 0; v < nv; ++v) out << num(stress[v](ij[comp].first, ij[comp].second)) << '\n';
  }
}

void write_solution_report(const Solution& solution, const std::string& path,
                           const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "regime=" << regime_name(solution.regime) << '\n';
  out << "residual_norm=" << num(solution.residual_norm) << '\n';
  out << "div_residual=" << num(solution.div_residual) << '\n';
  out << "u_h1=" << num(solution.stability.u_h1) << '\n';
  out << "p_l2=" << num(solution.stability.p_l2) << '\n';
  out << "f_l2=" << num(solution.stability.f_l2) << '\n';
  out << "g_l2=" << num(solution.stability.g_l2) << '\n';
  out << "h_lift_h1=" << num(solution.stability.h_lift_h1) << '\n';
  out << "data_norm=" << num(solution.stability.data_norm) << '\n';
  out << "stability_ratio=" << num(solution.stability.ratio) << '\n';
  for (const auto& [k, v] : extra) out << k << '=' << v << '\n';
}

}  // namespace stokes
