#include "stokes/fields.hpp"

#include "stokes/elements.hpp"

#include <stdexcept>

namespace stokes {

namespace {

struct Barycentric {
  double l0, l1, l2;
};

Barycentric barycentric(const TriMesh& mesh, int t, const Vec2& x) {
  const auto& tri = mesh.triangles()[t];
  const Vec2& a = mesh.vertices()[tri[0]];
  const Vec2& b = mesh.vertices()[tri[1]];
  const Vec2& c = mesh.vertices()[tri[2]];
  const double det = 2.0 * mesh.triangle_area(t);
  const double l1 = ((x.x() - a.x()) * (c.y() - a.y()) - (x.y() - a.y()) * (c.x() - a.x())) / det;
  const double l2 = ((x.y() - a.y()) * (b.x() - a.x()) - (x.x() - a.x()) * (b.y() - a.y())) / det;
  return {1.0 - l1 - l2, l1, l2};
}

int locate_or_throw(const TriMesh& mesh, const Vec2& x) {
  const int t = locate_triangle(mesh, x);
  if (t < 0) throw std::invalid_argument("point lies outside the mesh");
  return t;
}

}  // namespace

int locate_triangle(const TriMesh& mesh, const Vec2& x, double tol) {
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Barycentric l = barycentric(mesh, t, x);
    if (l.l0 >= -tol && l.l1 >= -tol && l.l2 >= -tol) return t;
  }
  return -1;
}

Vec2 evaluate_velocity(const TriMesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& u,
                       const Vec2& x) {
  const int t = locate_or_throw(mesh, x);
  const Barycentric l = barycentric(mesh, t, x);
  const auto n = p2_values(l.l1, l.l2);
  const auto& nodes = dofmap.cell_velocity_nodes(t);
  Vec2 value = Vec2::Zero();
  for (int a = 0; a < 6; ++a) {
    value.x() += n[a] * u[DofMap::velocity_dof(nodes[a], 0)];
    value.y() += n[a] * u[DofMap::velocity_dof(nodes[a], 1)];
  }
  return value;
}

Eigen::Matrix2d evaluate_velocity_gradient(const TriMesh& mesh, const DofMap& dofmap,
                                           const Eigen::VectorXd& u, const Vec2& x) {
  const int t = locate_or_throw(mesh, x);
  const Barycentric l = barycentric(mesh, t, x);
  const auto& tri = mesh.triangles()[t];
  const Vec2& a = mesh.vertices()[tri[0]];
  const Vec2& b = mesh.vertices()[tri[1]];
  const Vec2& c = mesh.vertices()[tri[2]];
  const double det = 2.0 * mesh.triangle_area(t);
  Eigen::Matrix2d jinv_t;
  jinv_t << (c.y() - a.y()) / det, (a.y() - b.y()) / det,
      (a.x() - c.x()) / det, (b.x() - a.x()) / det;

  const auto ref = p2_ref_gradients(l.l1, l.l2);
  const auto& nodes = dofmap.cell_velocity_nodes(t);
  Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
  for (int k = 0; k < 6; ++k) {
    const Vec2 g = jinv_t * ref[k];
    const double ux = u[DofMap::velocity_dof(nodes[k], 0)];
    const double uy = u[DofMap::velocity_dof(nodes[k], 1)];
    grad(0, 0) += ux * g.x();
    grad(0, 1) += ux * g.y();
    grad(1, 0) += uy * g.x();
    grad(1, 1) += uy * g.y();
  }
  return grad;
}

double evaluate_pressure(const TriMesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& p,
                         const Vec2& x) {
  const int t = locate_or_throw(mesh, x);
  const Barycentric l = barycentric(mesh, t, x);
  const auto q = p1_values(l.l1, l.l2);
  const auto& pres = dofmap.cell_pressure_dofs(t);
  return q[0] * p[pres[0]] + q[1] * p[pres[1]] + q[2] * p[pres[2]];
}

}  // namespace stokes
