#include "stokes/analysis.hpp"

#include "stokes/errors.hpp"
#include "stokes/log.hpp"
#include "stokes/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

namespace stokes {

namespace {

using ApplyFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct PencilEig {
  double value = 0.0;
  Eigen::VectorXd vector;
  int iterations = 0;
};

// Block inverse/power iteration with Rayleigh-Ritz extraction for the
// symmetric pencil (S, M). `apply` performs one iteration step (S^{-1} M x
// for the smallest eigenvalue, (M)^{-1} S x style maps for the largest);
// s_mul and m_mul are plain matrix-vector products used for the Rayleigh
// quotients. Deterministic: fixed-seed start block.
PencilEig iterate_pencil(int n, const ApplyFn& apply, const ApplyFn& s_mul, const ApplyFn& m_mul,
                         bool want_largest, int block, double tol, int maxit) {
  if (n <= 0) throw std::invalid_argument("iterate_pencil: empty space");
  block = std::min(block, n);

  std::mt19937 rng(20240811u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd X(n, block);
  for (int j = 0; j < block; ++j) {
    for (int i = 0; i < n; ++i) X(i, j) = dist(rng);
  }

  double value = 0.0;
  Eigen::VectorXd best;
  double prev = std::numeric_limits<double>::quiet_NaN();
  int it = 0;
  for (it = 1; it <= maxit; ++it) {
    Eigen::MatrixXd Y(n, X.cols());
    for (int j = 0; j < X.cols(); ++j) Y.col(j) = apply(X.col(j));

    // M-orthonormalize the block, dropping near-dependent directions.
    Eigen::MatrixXd MY(n, Y.cols());
    for (int j = 0; j < Y.cols(); ++j) MY.col(j) = m_mul(Y.col(j));
    Eigen::MatrixXd G = Y.transpose() * MY;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gs(G);
    const double gmax = gs.eigenvalues().maxCoeff();
    int keep = 0;
    for (int j = 0; j < G.rows(); ++j) {
      if (gs.eigenvalues()[j] > 1e-13 * gmax) ++keep;
    }
    if (keep == 0) throw NumericalBreakdownError("iterate_pencil: block collapsed");
    Eigen::MatrixXd T(G.rows(), keep);
    int col = 0;
    for (int j = 0; j < G.rows(); ++j) {
      if (gs.eigenvalues()[j] > 1e-13 * gmax) {
        T.col(col++) = gs.eigenvectors().col(j) / std::sqrt(gs.eigenvalues()[j]);
      }
    }
    Eigen::MatrixXd Q = Y * T;  // M-orthonormal

    Eigen::MatrixXd SQ(n, keep);
    for (int j = 0; j < keep; ++j) SQ.col(j) = s_mul(Q.col(j));
    Eigen::MatrixXd H = Q.transpose() * SQ;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(0.5 * (H + H.transpose()));

    const int pick = want_largest ? keep - 1 : 0;
    value = hs.eigenvalues()[pick];
    best = Q * hs.eigenvectors().col(pick);
    X = Q * hs.eigenvectors();

    if (std::isfinite(prev)) {
      const double change = std::abs(value - prev) / std::max(std::abs(value), 1e-300);
      if (change < tol) break;
    }
    prev = value;
  }
  return PencilEig{value, best, it};
}

Eigen::VectorXd embed_free(const Eigen::VectorXd& x_free, const std::vector<int>& free_dofs,
                           int n_full) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(n_full);
  for (std::size_t k = 0; k < free_dofs.size(); ++k) full[free_dofs[k]] = x_free[k];
  return full;
}

Eigen::VectorXd p1_load(const TriMesh& mesh, const DofMap& dofmap, const ScalarField& f) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(dofmap.n_pre_dofs());
  if (!f) return load;
  const auto rule = triangle_quadrature_degree4();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Vec2& a = mesh.vertices()[tri[0]];
    const Vec2& b = mesh.vertices()[tri[1]];
    const Vec2& c = mesh.vertices()[tri[2]];
    const auto& pres = dofmap.cell_pressure_dofs(t);
    for (const auto& rp : rule) {
      const Vec2 x = rp.l0 * a + rp.l1 * b + rp.l2 * c;
      const double w = rp.weight * mesh.triangle_area(t);
      const double fx = f(x);
      load[pres[0]] += w * rp.l0 * fx;
      load[pres[1]] += w * rp.l1 * fx;
      load[pres[2]] += w * rp.l2 * fx;
    }
  }
  return load;
}

// KKT system for minimum-H1-norm fields under the divergence constraint
// B_f u = c, optionally with the mean-pressure multiplier pin (needed when
// B_f^T has the constant in its kernel).
Eigen::VectorXd constrained_min_norm(const SparseMat& h1_ff, const SparseMat& b_f,
                                     const Eigen::VectorXd& c, const Eigen::VectorXd* mean_pin) {
  const int nf = static_cast<int>(h1_ff.rows());
  const int np = static_cast<int>(b_f.rows());
  const int n = nf + np + (mean_pin ? 1 : 0);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(h1_ff.nonZeros() + 2 * b_f.nonZeros() + (mean_pin ? 2 * np : 0));
  for (int k = 0; k < h1_ff.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(h1_ff, k); it; ++it) {
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int k = 0; k < b_f.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(b_f, k); it; ++it) {
      trips.emplace_back(nf + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      trips.emplace_back(static_cast<int>(it.col()), nf + static_cast<int>(it.row()), it.value());
    }
  }
  if (mean_pin) {
    for (int j = 0; j < np; ++j) {
      if ((*mean_pin)[j] != 0.0) {
        trips.emplace_back(n - 1, nf + j, (*mean_pin)[j]);
        trips.emplace_back(nf + j, n - 1, (*mean_pin)[j]);
      }
    }
  }
  SparseMat K(n, n);
  K.setFromTriplets(trips.begin(), trips.end());
  K.makeCompressed();

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs.segment(nf, np) = c;
  if (rhs.norm() == 0.0) return Eigen::VectorXd::Zero(nf);

  Eigen::SparseLU<SparseMat> lu;
  lu.analyzePattern(K);
  lu.factorize(K);
  if (lu.info() != Eigen::Success) {
    throw NumericalBreakdownError("constrained_min_norm: factorization failed");
  }
  const Eigen::VectorXd z = lu.solve(rhs);
  const double residual = (K * z - rhs).norm() / rhs.norm();
  if (!z.allFinite() || residual > 1e-9) {
    throw NumericalBreakdownError("constrained_min_norm: residual " + std::to_string(residual),
                                  {residual});
  }
  return z.head(nf);
}

}  // namespace

const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::korn1: return "korn1";
    case Quantity::korn3: return "korn3";
    case Quantity::infsup: return "infsup";
    case Quantity::lambda1: return "lambda1";
  }
  return "?";
}

ConstantReport korn_constant(const TriMesh& mesh, const DofMap& dofmap,
                             const BoundaryPartition& partition, int level) {
  if (!(partition.dirichlet_measure > 0.0)) {
    throw std::invalid_argument(
        "korn_constant: the Dirichlet part must have positive measure (rigid modes make the "
        "constant infinite otherwise)");
  }
  const SparseMat energy = assemble_viscous(mesh, dofmap, 0.5);  // int e(grad u):e(grad v)
  const SparseMat h1 = velocity_h1_matrix(mesh, dofmap);
  const FreeDofMaps maps = free_dof_maps(dofmap);
  const int nf = static_cast<int>(maps.free.size());
  if (nf == 0) throw std::invalid_argument("korn_constant: empty constrained space");

  const SparseMat e_ff = slice_rows_columns(energy, maps.full_to_free, nf);
  const SparseMat m_ff = slice_rows_columns(h1, maps.full_to_free, nf);

  Eigen::SimplicialLDLT<SparseMat> e_fact(e_ff);
  if (e_fact.info() != Eigen::Success) {
    throw NumericalBreakdownError("korn_constant: energy factorization failed");
  }
  const PencilEig eig = iterate_pencil(
      nf, [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(e_fact.solve(m_ff * x)); },
      [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(e_ff * x); },
      [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(m_ff * x); },
      /*want_largest=*/false, 4, 1e-11, 500);

  ConstantReport report;
  report.quantity = Quantity::korn3;
  report.value = 1.0 / std::sqrt(eig.value);
  report.mesh_level = level;
  report.extremal_velocity = embed_free(eig.vector, maps.free, dofmap.n_vel_dofs());
  report.iterations = eig.iterations;
  return report;
}

ConstantReport korn_first_constant(const TriMesh& mesh, const DofMap& dofmap, int level) {
  const SparseMat energy = assemble_viscous(mesh, dofmap, 0.5);
  const SparseMat grad = velocity_gradient_matrix(mesh, dofmap);
  SparseMat denom = velocity_mass_matrix(mesh, dofmap);
  denom += energy;
  denom.makeCompressed();

  Eigen::SimplicialLDLT<SparseMat> d_fact(denom);
  if (d_fact.info() != Eigen::Success) {
    throw NumericalBreakdownError("korn_first_constant: factorization failed");
  }
  const int n = dofmap.n_vel_dofs();
  const PencilEig eig = iterate_pencil(
      n, [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(d_fact.solve(grad * x)); },
      [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(grad * x); },
      [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(denom * x); },
      /*want_largest=*/true, 4, 1e-11, 500);

  ConstantReport report;
  report.quantity = Quantity::korn1;
  report.value = std::sqrt(eig.value);
  report.mesh_level = level;
  report.extremal_velocity = eig.vector;
  report.iterations = eig.iterations;
  return report;
}

ConstantReport lambda1(const TriMesh& mesh, const DofMap& dofmap,
                       const BoundaryPartition& partition, int level) {
  if (!(partition.dirichlet_measure > 0.0)) {
    throw std::invalid_argument("lambda1: the Dirichlet part must have positive measure");
  }
  const SparseMat energy = assemble_viscous(mesh, dofmap, 0.5);
  const SparseMat mass = velocity_mass_matrix(mesh, dofmap);
  const SparseMat b = assemble_divergence(mesh, dofmap);
  const SparseMat mp = pressure_mass_matrix(mesh, dofmap);
  const FreeDofMaps maps = free_dof_maps(dofmap);
  const int nf = static_cast<int>(maps.free.size());
  if (nf == 0) throw std::invalid_argument("lambda1: empty constrained space");
  const int np = dofmap.n_pre_dofs();

  const SparseMat e_ff = slice_rows_columns(energy, maps.full_to_free, nf);
  const SparseMat m_ff = slice_rows_columns(mass, maps.full_to_free, nf);
  const SparseMat b_f = slice_columns(b, maps.full_to_free, nf);

  // Saddle [[E, B^T],[B, 0]] (mean pin in the pure Dirichlet regime) gives
  // one shift-invert step restricted to the divergence-free subspace.
  const bool need_pin = partition.regime == Regime::dirichlet;
  const Eigen::VectorXd mean = mp * Eigen::VectorXd::Ones(np);
  const int n = nf + np + (need_pin ? 1 : 0);
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < e_ff.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(e_ff, k); it; ++it) {
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int k = 0; k < b_f.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(b_f, k); it; ++it) {
      trips.emplace_back(nf + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      trips.emplace_back(static_cast<int>(it.col()), nf + static_cast<int>(it.row()), it.value());
    }
  }
  if (need_pin) {
    for (int j = 0; j < np; ++j) {
      trips.emplace_back(n - 1, nf + j, mean[j]);
      trips.emplace_back(nf + j, n - 1, mean[j]);
    }
  }
  SparseMat K(n, n);
  K.setFromTriplets(trips.begin(), trips.end());
  K.makeCompressed();
  Eigen::SparseLU<SparseMat> lu;
  lu.analyzePattern(K);
  lu.factorize(K);
  if (lu.info() != Eigen::Success) {
    throw NumericalBreakdownError("lambda1: saddle factorization failed");
  }

  const PencilEig eig = iterate_pencil(
      nf,
      [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        rhs.head(nf) = m_ff * x;
        const Eigen::VectorXd z = lu.solve(rhs);
        return Eigen::VectorXd(z.head(nf));
      },
      [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(e_ff * x); },
      [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(m_ff * x); },
      /*want_largest=*/false, 4, 1e-11, 500);

  ConstantReport report;
  report.quantity = Quantity::lambda1;
  report.value = eig.value;
  report.mesh_level = level;
  report.extremal_velocity = embed_free(eig.vector, maps.free, dofmap.n_vel_dofs());
  report.iterations = eig.iterations;
  return report;
}

ConstantReport infsup_constant(const TriMesh& mesh, const DofMap& dofmap,
                               const BoundaryPartition& partition, int level) {
  const SparseMat h1 = velocity_h1_matrix(mesh, dofmap);
  const SparseMat b = assemble_divergence(mesh, dofmap);
  const SparseMat mp = pressure_mass_matrix(mesh, dofmap);
  const FreeDofMaps maps = free_dof_maps(dofmap);
  const int nf = static_cast<int>(maps.free.size());
  if (nf == 0) throw std::invalid_argument("infsup_constant: empty velocity space");
  const int np = dofmap.n_pre_dofs();

  const SparseMat h1_ff = slice_rows_columns(h1, maps.full_to_free, nf);
  const SparseMat b_f = slice_columns(b, maps.full_to_free, nf);

  ConstantReport report;
  report.quantity = Quantity::infsup;
  report.mesh_level = level;

  // Constant pressures: in the pure Dirichlet regime B^T annihilates them
  // (zero Schur eigenvalue); detect, report, and deflate.
  const Eigen::VectorXd bt_ones = b_f.transpose() * Eigen::VectorXd::Ones(np);
  report.zero_mode_residual = bt_ones.norm() / std::max(b_f.norm(), 1e-300);
  const bool exclude_constants = partition.regime == Regime::dirichlet;
  if (exclude_constants) report.excluded_zero_modes = 1;

  const Eigen::VectorXd mean = mp * Eigen::VectorXd::Ones(np);
  const double mean_scale = mean.sum();  // = measure of the domain

  const int n = nf + np + (exclude_constants ? 1 : 0);
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < h1_ff.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(h1_ff, k); it; ++it) {
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int k = 0; k < b_f.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(b_f, k); it; ++it) {
      trips.emplace_back(nf + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      trips.emplace_back(static_cast<int>(it.col()), nf + static_cast<int>(it.row()), it.value());
    }
  }
  if (exclude_constants) {
    for (int j = 0; j < np; ++j) {
      trips.emplace_back(n - 1, nf + j, mean[j]);
      trips.emplace_back(nf + j, n - 1, mean[j]);
    }
  }
  SparseMat K(n, n);
  K.setFromTriplets(trips.begin(), trips.end());
  K.makeCompressed();
  Eigen::SparseLU<SparseMat> lu;
  lu.analyzePattern(K);
  lu.factorize(K);
  if (lu.info() != Eigen::Success) {
    throw NumericalBreakdownError("infsup_constant: saddle factorization failed");
  }

  Eigen::SimplicialLDLT<SparseMat> h1_fact(h1_ff);
  if (h1_fact.info() != Eigen::Success) {
    throw NumericalBreakdownError("infsup_constant: H1 factorization failed");
  }

  const auto deflate = [&](Eigen::VectorXd q) {
    if (exclude_constants) q.array() -= mean.dot(q) / mean_scale;
    return q;
  };

  const PencilEig eig = iterate_pencil(
      np,
      [&](const Eigen::VectorXd& q) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        rhs.segment(nf, np) = -(mp * deflate(q));
        const Eigen::VectorXd z = lu.solve(rhs);
        return deflate(z.segment(nf, np));
      },
      [&](const Eigen::VectorXd& q) {
        const Eigen::VectorXd s = h1_fact.solve(Eigen::VectorXd(b_f.transpose() * deflate(q)));
        return Eigen::VectorXd(b_f * s);
      },
      [&](const Eigen::VectorXd& q) { return Eigen::VectorXd(mp * deflate(q)); },
      /*want_largest=*/false, 4, 1e-11, 500);

  report.value = std::sqrt(std::max(0.0, eig.value));
  report.extremal_pressure = deflate(eig.vector);
  report.iterations = eig.iterations;
  return report;
}

RigidKernel rigid_kernel(const TriMesh& mesh, const DofMap& dofmap) {
  const SparseMat energy = assemble_viscous(mesh, dofmap, 0.5);
  const FreeDofMaps maps = free_dof_maps(dofmap);
  const int nf = static_cast<int>(maps.free.size());

  RigidKernel kernel;
  if (nf == 0) return kernel;

  const Eigen::MatrixXd dense = Eigen::MatrixXd(slice_rows_columns(energy, maps.full_to_free, nf));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
  const double lam_max = std::max(eig.eigenvalues().maxCoeff(), 1e-300);
  for (int k = 0; k < nf; ++k) {
    if (eig.eigenvalues()[k] < 1e-10 * lam_max) {
      kernel.basis.push_back(embed_free(eig.eigenvectors().col(k), maps.free,
                                        dofmap.n_vel_dofs()));
    }
  }
  kernel.dimension = static_cast<int>(kernel.basis.size());
  return kernel;
}

BogovskiiResult bogovskii_solve(const TriMesh& mesh, const DofMap& dofmap,
                                const BoundaryPartition& partition, const ScalarField& f) {
  const Eigen::VectorXd load = p1_load(mesh, dofmap, f);  // int psi_j f dx
  double f_l1 = 0.0, f_l2_sq = 0.0;
  if (f) {
    const auto rule = triangle_quadrature_degree4();
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      const auto& tri = mesh.triangles()[t];
      const Vec2& a = mesh.vertices()[tri[0]];
      const Vec2& b = mesh.vertices()[tri[1]];
      const Vec2& c = mesh.vertices()[tri[2]];
      for (const auto& rp : rule) {
        const double fx = f(Vec2(rp.l0 * a + rp.l1 * b + rp.l2 * c));
        const double w = rp.weight * mesh.triangle_area(t);
        f_l1 += w * std::abs(fx);
        f_l2_sq += w * fx * fx;
      }
    }
  }

  if (partition.regime == Regime::dirichlet) {
    const double total = load.sum();  // = int f dx
    if (std::abs(total) > 1e-8 * std::max(f_l1, 1e-30)) {
      throw IncompatibleDataError(
          "bogovskii_solve: in the pure Dirichlet regime the divergence datum must have zero "
          "mean, int f dx = " + std::to_string(total),
          {total});
    }
  }

  const SparseMat h1 = velocity_h1_matrix(mesh, dofmap);
  const SparseMat b = assemble_divergence(mesh, dofmap);
  const SparseMat mp = pressure_mass_matrix(mesh, dofmap);
  const FreeDofMaps maps = free_dof_maps(dofmap);
  const int nf = static_cast<int>(maps.free.size());
  if (nf == 0) throw std::invalid_argument("bogovskii_solve: empty velocity space");

  const SparseMat h1_ff = slice_rows_columns(h1, maps.full_to_free, nf);
  const SparseMat b_f = slice_columns(b, maps.full_to_free, nf);

  // b(u, q) = -int q div u, so weak divergence f means B u = -load.
  const Eigen::VectorXd c = -load;
  const Eigen::VectorXd mean = mp * Eigen::VectorXd::Ones(dofmap.n_pre_dofs());
  const Eigen::VectorXd* pin =
      partition.regime == Regime::dirichlet ? &mean : nullptr;
  const Eigen::VectorXd u_free = constrained_min_norm(h1_ff, b_f, c, pin);

  BogovskiiResult result;
  result.u = embed_free(u_free, maps.free, dofmap.n_vel_dofs());
  result.u_h1 = std::sqrt(std::max(0.0, result.u.dot(h1 * result.u)));
  result.f_l2 = std::sqrt(f_l2_sq);
  result.bound = result.f_l2 > 0.0 ? result.u_h1 / result.f_l2 : 0.0;
  return result;
}

Eigen::VectorXd lift_divergence_free(const TriMesh& mesh, const DofMap& dofmap,
                                     const BoundaryPartition& partition, const VectorField& h) {
  const Eigen::VectorXd prescribed = interpolate_dirichlet_values(dofmap, h);
  const SparseMat b = assemble_divergence(mesh, dofmap);
  const SparseMat h1 = velocity_h1_matrix(mesh, dofmap);
  const FreeDofMaps maps = free_dof_maps(dofmap);
  const int nf = static_cast<int>(maps.free.size());

  const Eigen::VectorXd target = b * prescribed;  // divergence functional of the raw lift
  if (partition.regime == Regime::dirichlet) {
    const double total = target.sum();  // = -int div(lift) dx = -boundary flux of h
    if (std::abs(total) > 1e-8 * std::max(prescribed.lpNorm<1>(), 1e-30)) {
      throw IncompatibleDataError(
          "lift_divergence_free: boundary datum carries net flux; no divergence-free lift "
          "exists in the pure Dirichlet regime",
          {total});
    }
  }
  if (nf == 0) return prescribed;  // fully constrained: nothing to correct

  const SparseMat h1_ff = slice_rows_columns(h1, maps.full_to_free, nf);
  const SparseMat b_f = slice_columns(b, maps.full_to_free, nf);
  const SparseMat mp = pressure_mass_matrix(mesh, dofmap);
  const Eigen::VectorXd mean = mp * Eigen::VectorXd::Ones(dofmap.n_pre_dofs());
  const Eigen::VectorXd* pin =
      partition.regime == Regime::dirichlet ? &mean : nullptr;

  // Correct the raw lift by the minimum-norm field with the same divergence.
  const Eigen::VectorXd w_free = constrained_min_norm(h1_ff, b_f, target, pin);
  Eigen::VectorXd u = prescribed;
  for (int k = 0; k < nf; ++k) u[maps.free[k]] -= w_free[k];
  return u;
}

void write_constants_csv(const std::string& path, const std::vector<ConstantRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "level,h_max,quantity,value\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", row.h_max);
    out << row.level << ',' << buf << ',' << quantity_name(row.quantity) << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", row.value);
    out << buf << '\n';
  }
}

}  // namespace stokes
