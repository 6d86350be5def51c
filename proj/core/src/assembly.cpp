#include "stokes/assembly.hpp"

#include "stokes/elements.hpp"
#include "stokes/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace stokes {

namespace {

struct CellQPoint {
  double weight;  // physical weight (rule weight times area)
  Vec2 x;
  std::array<double, 6> n;  // P2 values
  std::array<Vec2, 6> g;    // P2 physical gradients
  std::array<double, 3> q;  // P1 values
};

// Evaluates shapes and physical gradients at the degree-4 rule points of
// cell t. The affine gradient map is J^{-T} with J = [b-a | c-a].
std::vector<CellQPoint> cell_qpoints(const TriMesh& mesh, int t) {
  const auto& tri = mesh.triangles()[t];
  const Vec2& a = mesh.vertices()[tri[0]];
  const Vec2& b = mesh.vertices()[tri[1]];
  const Vec2& c = mesh.vertices()[tri[2]];
  const double det = 2.0 * mesh.triangle_area(t);
  Eigen::Matrix2d jinv_t;
  jinv_t << (c.y() - a.y()) / det, (a.y() - b.y()) / det,
      (a.x() - c.x()) / det, (b.x() - a.x()) / det;

  const auto rule = triangle_quadrature_degree4();
  std::vector<CellQPoint> pts(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const auto& rp = rule[k];
    CellQPoint& p = pts[k];
    p.weight = rp.weight * mesh.triangle_area(t);
    p.x = rp.l0 * a + rp.l1 * b + rp.l2 * c;
    p.n = p2_values(rp.l1, rp.l2);
    const auto ref = p2_ref_gradients(rp.l1, rp.l2);
    for (int i = 0; i < 6; ++i) p.g[i] = jinv_t * ref[i];
    p.q = p1_values(rp.l1, rp.l2);
  }
  return pts;
}

SparseMat from_triplets(int rows, int cols, std::vector<Eigen::Triplet<double>>& trips) {
  SparseMat m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  m.prune([](int, int, double v) { return std::abs(v) > 1e-30; });
  m.makeCompressed();
  return m;
}

}  // namespace

SparseMat assemble_viscous(const TriMesh& mesh, const DofMap& dofmap, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("assemble_viscous: mu must be positive");
  const int n = dofmap.n_vel_dofs();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 144);

  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& nodes = dofmap.cell_velocity_nodes(t);
    double local[12][12] = {};
    for (const auto& p : cell_qpoints(mesh, t)) {
      for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
          const double gg = p.g[a].dot(p.g[b]);
          for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
              // 2mu e(u):e(v) = mu (delta_ij grad.grad + d_j Na d_i Nb)
              const double v = mu * ((i == j ? gg : 0.0) + p.g[a][j] * p.g[b][i]);
              local[2 * a + i][2 * b + j] += p.weight * v;
            }
          }
        }
      }
    }
    for (int a = 0; a < 6; ++a) {
      for (int i = 0; i < 2; ++i) {
        for (int b = 0; b < 6; ++b) {
          for (int j = 0; j < 2; ++j) {
            trips.emplace_back(DofMap::velocity_dof(nodes[a], i),
                               DofMap::velocity_dof(nodes[b], j), local[2 * a + i][2 * b + j]);
          }
        }
      }
    }
  }
  return from_triplets(n, n, trips);
}

SparseMat assemble_divergence(const TriMesh& mesh, const DofMap& dofmap) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 36);

  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& nodes = dofmap.cell_velocity_nodes(t);
    const auto& pres = dofmap.cell_pressure_dofs(t);
    double local[3][12] = {};
    for (const auto& p : cell_qpoints(mesh, t)) {
      for (int c = 0; c < 3; ++c) {
        for (int a = 0; a < 6; ++a) {
          for (int i = 0; i < 2; ++i) {
            local[c][2 * a + i] -= p.weight * p.q[c] * p.g[a][i];
          }
        }
      }
    }
    for (int c = 0; c < 3; ++c) {
      for (int a = 0; a < 6; ++a) {
        for (int i = 0; i < 2; ++i) {
          trips.emplace_back(pres[c], DofMap::velocity_dof(nodes[a], i), local[c][2 * a + i]);
        }
      }
    }
  }
  return from_triplets(dofmap.n_pre_dofs(), dofmap.n_vel_dofs(), trips);
}

namespace {

SparseMat velocity_scalar_gram(const TriMesh& mesh, const DofMap& dofmap, bool gradient) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 72);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& nodes = dofmap.cell_velocity_nodes(t);
    double local[6][6] = {};
    for (const auto& p : cell_qpoints(mesh, t)) {
      for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
          local[a][b] += p.weight * (gradient ? p.g[a].dot(p.g[b]) : p.n[a] * p.n[b]);
        }
      }
    }
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        for (int i = 0; i < 2; ++i) {
          trips.emplace_back(DofMap::velocity_dof(nodes[a], i),
                             DofMap::velocity_dof(nodes[b], i), local[a][b]);
        }
      }
    }
  }
  return from_triplets(dofmap.n_vel_dofs(), dofmap.n_vel_dofs(), trips);
}

}  // namespace

SparseMat velocity_mass_matrix(const TriMesh& mesh, const DofMap& dofmap) {
  return velocity_scalar_gram(mesh, dofmap, false);
}

SparseMat velocity_gradient_matrix(const TriMesh& mesh, const DofMap& dofmap) {
  return velocity_scalar_gram(mesh, dofmap, true);
}

SparseMat velocity_h1_matrix(const TriMesh& mesh, const DofMap& dofmap) {
  SparseMat m = velocity_mass_matrix(mesh, dofmap);
  m += velocity_gradient_matrix(mesh, dofmap);
  m.makeCompressed();
  return m;
}

SparseMat pressure_mass_matrix(const TriMesh& mesh, const DofMap& dofmap) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 9);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& pres = dofmap.cell_pressure_dofs(t);
    double local[3][3] = {};
    for (const auto& p : cell_qpoints(mesh, t)) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) local[a][b] += p.weight * p.q[a] * p.q[b];
      }
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) trips.emplace_back(pres[a], pres[b], local[a][b]);
    }
  }
  return from_triplets(dofmap.n_pre_dofs(), dofmap.n_pre_dofs(), trips);
}

LoadVectors assemble_loads(const TriMesh& mesh, const DofMap& dofmap,
                           const BoundaryPartition& partition, const VectorField& f,
                           const TractionField& g) {
  LoadVectors loads;
  loads.rhs_vel = Eigen::VectorXd::Zero(dofmap.n_vel_dofs());
  loads.rhs_pre = Eigen::VectorXd::Zero(dofmap.n_pre_dofs());

  if (f) {
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      const auto& nodes = dofmap.cell_velocity_nodes(t);
      for (const auto& p : cell_qpoints(mesh, t)) {
        const Vec2 fx = f(p.x);
        for (int a = 0; a < 6; ++a) {
          loads.rhs_vel[DofMap::velocity_dof(nodes[a], 0)] -= p.weight * fx.x() * p.n[a];
          loads.rhs_vel[DofMap::velocity_dof(nodes[a], 1)] -= p.weight * fx.y() * p.n[a];
        }
      }
    }
  }

  if (g && !partition.neumann_tags.empty()) {
    const int nv = mesh.n_vertices();
    const auto gl_nodes = gauss_legendre_nodes(2);   // exact through cubic traces
    const auto gl_weights = gauss_legendre_weights(2);
    for (const auto& be : mesh.boundary_edges()) {
      if (!partition.neumann_tags.count(be.tag)) continue;
      const Edge& e = mesh.edges()[be.edge];
      const Vec2& a = mesh.vertices()[e.v0];
      const Vec2& b = mesh.vertices()[e.v1];
      const double len = (b - a).norm();
      const int enodes[3] = {e.v0, e.v1, nv + be.edge};
      for (int q = 0; q < 2; ++q) {
        const double s = 0.5 * (gl_nodes[q] + 1.0);
        const double w = 0.5 * len * gl_weights[q];
        const Vec2 x = a + s * (b - a);
        const Vec2 gx = g(x, be.normal, be.tag);
        const auto tr = p2_edge_values(s);
        for (int k = 0; k < 3; ++k) {
          loads.rhs_vel[DofMap::velocity_dof(enodes[k], 0)] += w * gx.x() * tr[k];
          loads.rhs_vel[DofMap::velocity_dof(enodes[k], 1)] += w * gx.y() * tr[k];
        }
      }
    }
  }
  return loads;
}

SaddleSystem assemble_system(const TriMesh& mesh, const DofMap& dofmap,
                             const BoundaryPartition& partition, double mu,
                             const VectorField& f, const TractionField& g) {
  SaddleSystem sys;
  sys.A = assemble_viscous(mesh, dofmap, mu);
  sys.B = assemble_divergence(mesh, dofmap);
  LoadVectors loads = assemble_loads(mesh, dofmap, partition, f, g);
  sys.rhs_vel = std::move(loads.rhs_vel);
  sys.rhs_pre = std::move(loads.rhs_pre);
  sys.regime = partition.regime;
  sys.mu = mu;
  sys.pressure_mass = pressure_mass_matrix(mesh, dofmap);
  return sys;
}

FreeDofMaps free_dof_maps(const DofMap& dofmap) {
  FreeDofMaps maps;
  maps.full_to_free.assign(dofmap.n_vel_dofs(), -1);
  const auto& constrained = dofmap.dirichlet_values();
  for (int dof = 0; dof < dofmap.n_vel_dofs(); ++dof) {
    if (constrained.count(dof)) continue;
    maps.full_to_free[dof] = static_cast<int>(maps.free.size());
    maps.free.push_back(dof);
  }
  return maps;
}

SparseMat slice_columns(const SparseMat& m, const std::vector<int>& full_to_free, int n_free) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.nonZeros());
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(m, k); it; ++it) {
      const int c = full_to_free[it.col()];
      if (c >= 0) trips.emplace_back(static_cast<int>(it.row()), c, it.value());
    }
  }
  SparseMat out(m.rows(), n_free);
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

SparseMat slice_rows_columns(const SparseMat& m, const std::vector<int>& full_to_free,
                             int n_free) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.nonZeros());
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(m, k); it; ++it) {
      const int r = full_to_free[it.row()];
      const int c = full_to_free[it.col()];
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
    }
  }
  SparseMat out(n_free, n_free);
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

void apply_dirichlet_lift(SaddleSystem& sys, const DofMap& dofmap) {
  FreeDofMaps maps = free_dof_maps(dofmap);
  sys.free_dofs = std::move(maps.free);
  sys.full_to_free = std::move(maps.full_to_free);

  sys.prescribed = Eigen::VectorXd::Zero(dofmap.n_vel_dofs());
  for (const auto& [dof, value] : dofmap.dirichlet_values()) sys.prescribed[dof] = value;

  const Eigen::VectorXd a_shift = sys.A * sys.prescribed;
  const Eigen::VectorXd b_shift = sys.B * sys.prescribed;

  const int nf = sys.n_free();
  sys.rhs_vel_f.resize(nf);
  for (int k = 0; k < nf; ++k) {
    sys.rhs_vel_f[k] = sys.rhs_vel[sys.free_dofs[k]] - a_shift[sys.free_dofs[k]];
  }
  sys.rhs_pre_f = sys.rhs_pre - b_shift;

  sys.A_ff = slice_rows_columns(sys.A, sys.full_to_free, nf);
  sys.B_f = slice_columns(sys.B, sys.full_to_free, nf);
  sys.eliminated = true;
}

Eigen::VectorXd reconstruct_velocity(const SaddleSystem& sys, const Eigen::VectorXd& u_free) {
  Eigen::VectorXd u = sys.prescribed;
  for (int k = 0; k < sys.n_free(); ++k) u[sys.free_dofs[k]] = u_free[k];
  return u;
}

double energy_seminorm_sq(const TriMesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& u,
                          double mu) {
  double total = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& nodes = dofmap.cell_velocity_nodes(t);
    for (const auto& p : cell_qpoints(mesh, t)) {
      Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
      for (int a = 0; a < 6; ++a) {
        const double ux = u[DofMap::velocity_dof(nodes[a], 0)];
        const double uy = u[DofMap::velocity_dof(nodes[a], 1)];
        grad(0, 0) += ux * p.g[a][0];
        grad(0, 1) += ux * p.g[a][1];
        grad(1, 0) += uy * p.g[a][0];
        grad(1, 1) += uy * p.g[a][1];
      }
      const Eigen::Matrix2d sym = 0.5 * (grad + grad.transpose());
      total += p.weight * 2.0 * mu * sym.squaredNorm();
    }
  }
  return total;
}

void write_matrix_market(const SparseMat& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  char buf[64];
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(m, k); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%.17g", it.value());
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << buf << '\n';
    }
  }
}

}  // namespace stokes
