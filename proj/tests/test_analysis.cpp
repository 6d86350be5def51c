#include "stokes/analysis.hpp"
#include "stokes/solver.hpp"
#include "stokes/validation.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include "test_helpers.hpp"

using namespace stokes;

namespace {

struct Level {
  TriMesh mesh;
  BoundaryPartition partition;
  DofMap dofmap;
};

Level make_level(int nx, int ny, const std::set<int>& dirichlet) {
  TriMesh mesh = build_rect_mesh(2, 1, nx, ny);
  BoundaryPartition part = partition_boundary(mesh, dirichlet);
  DofMap dm = build_taylor_hood(mesh, part);
  return Level{std::move(mesh), std::move(part), std::move(dm)};
}

}  // namespace

TEST_SUITE_BEGIN("analysis");

TEST_CASE("korn constant on the fully clamped square") {
  const Level lvl = make_level(4, 2, {1, 2, 3, 4});
  const ConstantReport report = korn_constant(lvl.mesh, lvl.dofmap, lvl.partition);
  CHECK(report.value > 1.0);  // ||v||_H1 >= ||e|| always forces K >= 1

  // Eigen-identity: the extremal field reproduces the reported value through
  // quadrature of the evaluated fields.
  const double num = test_oracle::h1_norm_sq(lvl.mesh, lvl.dofmap, report.extremal_velocity);
  const double den = test_oracle::strain_energy(lvl.mesh, lvl.dofmap, report.extremal_velocity);
  CHECK(std::sqrt(num / den) == doctest::Approx(report.value).epsilon(1e-8));
}

TEST_CASE("eigensolves are deterministic across calls") {
  const Level lvl = make_level(4, 2, {3, 4});
  const double k1 = korn_constant(lvl.mesh, lvl.dofmap, lvl.partition).value;
  const double k2 = korn_constant(lvl.mesh, lvl.dofmap, lvl.partition).value;
  CHECK(k1 == k2);
  const double b1 = infsup_constant(lvl.mesh, lvl.dofmap, lvl.partition).value;
  const double b2 = infsup_constant(lvl.mesh, lvl.dofmap, lvl.partition).value;
  CHECK(b1 == b2);
}

TEST_CASE("korn constant requires a dirichlet part") {
  const Level lvl = make_level(2, 2, {});
  CHECK_THROWS_AS(korn_constant(lvl.mesh, lvl.dofmap, lvl.partition), std::invalid_argument);
}

TEST_CASE("korn constant grows with nested refinement") {
  const Level l0 = make_level(4, 2, {3, 4});
  const Level l1 = make_level(8, 4, {3, 4});
  const double k0 = korn_constant(l0.mesh, l0.dofmap, l0.partition).value;
  const double k1 = korn_constant(l1.mesh, l1.dofmap, l1.partition).value;
  CHECK(k1 >= k0 * (1.0 - 1e-9));
}

TEST_CASE("first korn constant") {
  const Level lvl = make_level(4, 2, {});
  const ConstantReport report = korn_first_constant(lvl.mesh, lvl.dofmap);

  // The rotation substituted into the quotient gives a lower bound:
  // |grad r|^2 = 2 |Omega| = 4, |r|^2 = int x^2 + y^2 = 10/3, e(r) = 0.
  const double lower = std::sqrt(4.0 / (10.0 / 3.0));
  CHECK(report.value >= lower - 1e-9);

  // Translation is not extremal: its quotient is zero.
  const DofMap& dm = lvl.dofmap;
  const RigidModes modes = rigid_modes(dm);
  CHECK(test_oracle::gradient_energy(lvl.mesh, dm, modes.modes[0]) < 1e-24);

  // Stable across two refinements within 5%.
  double prev = report.value;
  for (auto [nx, ny] : {std::pair{8, 4}, {16, 8}}) {
    const Level fine = make_level(nx, ny, {});
    const ConstantReport report_fine = korn_first_constant(fine.mesh, fine.dofmap);
    CHECK(std::abs(report_fine.value - prev) < 0.05 * prev);
    prev = report_fine.value;
  }

  // Eigen-identity through quadrature.
  const double grad = test_oracle::gradient_energy(lvl.mesh, dm, report.extremal_velocity);
  const double mass = test_oracle::l2_norm_sq_velocity(lvl.mesh, dm, report.extremal_velocity);
  const double strain = test_oracle::strain_energy(lvl.mesh, dm, report.extremal_velocity);
  CHECK(std::sqrt(grad / (mass + strain)) == doctest::Approx(report.value).epsilon(1e-8));
}

TEST_CASE("lambda1 on the channel partition") {
  const Level l0 = make_level(4, 2, {3, 4});
  const ConstantReport r0 = lambda1(l0.mesh, l0.dofmap, l0.partition);
  CHECK(r0.value > 0.0);

  // Divergence-free constraint is active on the extremal field.
  const SparseMat b = assemble_divergence(l0.mesh, l0.dofmap);
  CHECK((b * r0.extremal_velocity).lpNorm<Eigen::Infinity>() < 1e-8);

  // Nonincreasing under nested refinement.
  const Level l1 = make_level(8, 4, {3, 4});
  const ConstantReport r1 = lambda1(l1.mesh, l1.dofmap, l1.partition);
  CHECK(r1.value <= r0.value * (1.0 + 1e-9));

  // Eigen-identity through quadrature.
  const double strain = test_oracle::strain_energy(l0.mesh, l0.dofmap, r0.extremal_velocity);
  const double mass = test_oracle::l2_norm_sq_velocity(l0.mesh, l0.dofmap, r0.extremal_velocity);
  CHECK(strain / mass == doctest::Approx(r0.value).epsilon(1e-8));

  const Level neumann = make_level(2, 2, {});
  CHECK_THROWS_AS(lambda1(neumann.mesh, neumann.dofmap, neumann.partition),
                  std::invalid_argument);
}

TEST_CASE("inf-sup constant") {
  SUBCASE("positive on the channel partition across levels") {
    for (auto [nx, ny] : {std::pair{4, 2}, {8, 4}}) {
      const Level lvl = make_level(nx, ny, {3, 4});
      const ConstantReport report = infsup_constant(lvl.mesh, lvl.dofmap, lvl.partition);
      CHECK(report.value > 0.05);
      CHECK(report.excluded_zero_modes == 0);
      // The constant pressure is not in the kernel of B^T here.
      CHECK(report.zero_mode_residual > 1e-3);
    }
  }

  SUBCASE("dirichlet regime detects and excludes the constant pressure") {
    const Level lvl = make_level(4, 2, {1, 2, 3, 4});
    const ConstantReport report = infsup_constant(lvl.mesh, lvl.dofmap, lvl.partition);
    CHECK(report.excluded_zero_modes == 1);
    CHECK(report.zero_mode_residual < 1e-10);  // B^T annihilates constants
    CHECK(report.value > 0.05);                // positive on the mean-zero complement
    // The extremal pressure is mean-free.
    const SparseMat mp = pressure_mass_matrix(lvl.mesh, lvl.dofmap);
    const double mean =
        (mp * Eigen::VectorXd::Ones(lvl.dofmap.n_pre_dofs())).dot(report.extremal_pressure);
    CHECK(std::abs(mean) < 1e-9);
  }
}

TEST_CASE("rigid kernel dimension dichotomy") {
  SUBCASE("no dirichlet part: dimension 3") {
    const Level lvl = make_level(2, 1, {});
    const RigidKernel kernel = rigid_kernel(lvl.mesh, lvl.dofmap);
    CHECK(kernel.dimension == 3);
    // Each basis field has vanishing strain energy.
    for (const auto& v : kernel.basis) {
      CHECK(energy_seminorm_sq(lvl.mesh, lvl.dofmap, v, 0.5) < 1e-18);
    }
  }

  SUBCASE("one clamped side kills the kernel") {
    const Level lvl = make_level(1, 1, {3});  // a single bottom edge on the coarsest grid
    const RigidKernel kernel = rigid_kernel(lvl.mesh, lvl.dofmap);
    CHECK(kernel.dimension == 0);
  }

  SUBCASE("a single pinned vertex keeps the centered rotation") {
    const TriMesh mesh = build_rect_mesh(2, 1, 2, 1);
    const BoundaryPartition part = partition_boundary(mesh, {});
    DofMap dm = build_taylor_hood(mesh, part);
    dm.set_dirichlet_value(DofMap::velocity_dof(0, 0), 0.0);
    dm.set_dirichlet_value(DofMap::velocity_dof(0, 1), 0.0);
    const RigidKernel kernel = rigid_kernel(mesh, dm);
    CHECK(kernel.dimension >= 1);
  }
}

TEST_CASE("bogovskii solve") {
  const Level lvl = make_level(4, 2, {3, 4});

  SUBCASE("zero datum gives the zero field") {
    const BogovskiiResult r = bogovskii_solve(lvl.mesh, lvl.dofmap, lvl.partition,
                                              [](const Vec2&) { return 0.0; });
    CHECK(r.u.norm() == 0.0);
    CHECK(r.bound == 0.0);
  }

  SUBCASE("unit divergence pushes the net flux through the traction side") {
    const BogovskiiResult r =
        bogovskii_solve(lvl.mesh, lvl.dofmap, lvl.partition, [](const Vec2&) { return 1.0; });
    // Divergence theorem: int_boundary u.n = int div u = area = 2; the trace
    // vanishes on the walls, so everything exits through the lateral sides.
    double flux = 0.0;
    for (const auto& qp : boundary_quadrature(lvl.mesh, lvl.partition.neumann_tags, 5)) {
      flux += qp.weight * evaluate_velocity(lvl.mesh, lvl.dofmap, r.u, qp.point).dot(qp.normal);
    }
    CHECK(flux == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(r.bound > 0.0);
    // Zero trace on the walls.
    for (int n = 0; n < lvl.dofmap.n_velocity_nodes(); ++n) {
      if (lvl.dofmap.node_on_dirichlet(n)) {
        CHECK(r.u[DofMap::velocity_dof(n, 0)] == 0.0);
        CHECK(r.u[DofMap::velocity_dof(n, 1)] == 0.0);
      }
    }
  }

  SUBCASE("full dirichlet with nonzero mean is incompatible") {
    const Level all = make_level(2, 1, {1, 2, 3, 4});
    CHECK_THROWS_AS(
        bogovskii_solve(all.mesh, all.dofmap, all.partition, [](const Vec2&) { return 1.0; }),
        IncompatibleDataError);
  }

  SUBCASE("full dirichlet with zero mean works") {
    const Level all = make_level(4, 2, {1, 2, 3, 4});
    const auto f = [](const Vec2& x) { return x.x() - 1.0; };
    const BogovskiiResult r = bogovskii_solve(all.mesh, all.dofmap, all.partition, f);
    // Weak divergence matches the P1 moments of f: (B u)_j = -int psi_j f.
    const SparseMat b_all = assemble_divergence(all.mesh, all.dofmap);
    Eigen::VectorXd load = Eigen::VectorXd::Zero(all.dofmap.n_pre_dofs());
    const auto rule = triangle_quadrature_degree4();
    for (int t = 0; t < all.mesh.n_triangles(); ++t) {
      const auto& tri = all.mesh.triangles()[t];
      const Vec2& a = all.mesh.vertices()[tri[0]];
      const Vec2& b = all.mesh.vertices()[tri[1]];
      const Vec2& c = all.mesh.vertices()[tri[2]];
      for (const auto& rp : rule) {
        const Vec2 x = rp.l0 * a + rp.l1 * b + rp.l2 * c;
        const double w = rp.weight * all.mesh.triangle_area(t);
        load[tri[0]] += w * rp.l0 * f(x);
        load[tri[1]] += w * rp.l1 * f(x);
        load[tri[2]] += w * rp.l2 * f(x);
      }
    }
    CHECK((b_all * r.u + load).lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK(r.u_h1 > 0.0);
  }

  SUBCASE("linearity") {
    const auto f1 = [](const Vec2& x) { return x.x(); };
    const auto f2 = [](const Vec2& x) { return x.y() * x.y(); };
    const auto combo = [&](const Vec2& x) { return 2.0 * f1(x) - 3.0 * f2(x); };
    const BogovskiiResult r1 = bogovskii_solve(lvl.mesh, lvl.dofmap, lvl.partition, f1);
    const BogovskiiResult r2 = bogovskii_solve(lvl.mesh, lvl.dofmap, lvl.partition, f2);
    const BogovskiiResult rc = bogovskii_solve(lvl.mesh, lvl.dofmap, lvl.partition, combo);
    CHECK((rc.u - (2.0 * r1.u - 3.0 * r2.u)).lpNorm<Eigen::Infinity>() < 1e-8);
  }
}

TEST_CASE("divergence-free lift") {
  const Level lvl = make_level(4, 2, {3, 4});
  const SparseMat b = assemble_divergence(lvl.mesh, lvl.dofmap);

  SUBCASE("zero and no-slip data give the zero lift") {
    const Eigen::VectorXd u0 =
        lift_divergence_free(lvl.mesh, lvl.dofmap, lvl.partition,
                             [](const Vec2&) { return Vec2(0, 0); });
    CHECK(u0.norm() == 0.0);

    const ChannelParams params;
    const Eigen::VectorXd uw =
        lift_divergence_free(lvl.mesh, lvl.dofmap, lvl.partition,
                             [&](const Vec2& x) { return poiseuille(x, params).velocity; });
    CHECK(uw.norm() == 0.0);  // the trace vanishes on the walls
  }

  SUBCASE("uniform wall motion lifts to a divergence-free field") {
    const VectorField h = [](const Vec2&) { return Vec2(1.0, 0.0); };
    const Eigen::VectorXd u = lift_divergence_free(lvl.mesh, lvl.dofmap, lvl.partition, h);

    CHECK((b * u).lpNorm<Eigen::Infinity>() < 1e-10);
    // Exact nodal trace on the walls.
    for (int n = 0; n < lvl.dofmap.n_velocity_nodes(); ++n) {
      if (lvl.dofmap.node_on_dirichlet(n)) {
        CHECK(u[DofMap::velocity_dof(n, 0)] == doctest::Approx(1.0));
        CHECK(u[DofMap::velocity_dof(n, 1)] == 0.0);
      }
    }
    // Mass balance: total boundary flux vanishes, the lateral sides carry
    // equal and opposite flow.
    double flux_in = 0.0, flux_out = 0.0;
    for (const auto& qp : boundary_quadrature(lvl.mesh, 1, 5)) {
      flux_in += qp.weight * evaluate_velocity(lvl.mesh, lvl.dofmap, u, qp.point).dot(qp.normal);
    }
    for (const auto& qp : boundary_quadrature(lvl.mesh, 2, 5)) {
      flux_out += qp.weight * evaluate_velocity(lvl.mesh, lvl.dofmap, u, qp.point).dot(qp.normal);
    }
    CHECK(std::abs(flux_in + flux_out) < 1e-9);
    CHECK(std::abs(flux_out) > 0.1);  // mass really moves through the traction side
  }

  SUBCASE("lift energy dominates the constrained minimizer") {
    const VectorField h = [](const Vec2& x) { return Vec2(1.0 + 0.3 * x.x(), 0.0); };
    const Eigen::VectorXd lift = lift_divergence_free(lvl.mesh, lvl.dofmap, lvl.partition, h);

    // Direct minimization of the strain energy over the same admissible set
    // (dense KKT on the coarse mesh).
    DofMap dm = build_taylor_hood(lvl.mesh, lvl.partition);
    interpolate_boundary_velocity(dm, h);
    const SparseMat energy = assemble_viscous(lvl.mesh, dm, 0.5);
    const FreeDofMaps maps = free_dof_maps(dm);
    const int nf = static_cast<int>(maps.free.size());
    const int np = dm.n_pre_dofs();
    Eigen::VectorXd prescribed = interpolate_dirichlet_values(dm, h);

    const SparseMat e_ff = slice_rows_columns(energy, maps.full_to_free, nf);
    const SparseMat b_f = slice_columns(b, maps.full_to_free, nf);
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nf + np, nf + np);
    kkt.topLeftCorner(nf, nf) = Eigen::MatrixXd(e_ff);
    kkt.topRightCorner(nf, np) = Eigen::MatrixXd(b_f).transpose();
    kkt.bottomLeftCorner(np, nf) = Eigen::MatrixXd(b_f);
    Eigen::VectorXd rhs(nf + np);
    const Eigen::VectorXd a_shift = energy * prescribed;
    for (int k = 0; k < nf; ++k) rhs[k] = -a_shift[maps.free[k]];
    rhs.tail(np) = -(b * prescribed);
    const Eigen::VectorXd z = Eigen::FullPivLU<Eigen::MatrixXd>(kkt).solve(rhs);
    Eigen::VectorXd minimizer = prescribed;
    for (int k = 0; k < nf; ++k) minimizer[maps.free[k]] += z[k];

    const double lift_energy = energy_seminorm_sq(lvl.mesh, lvl.dofmap, lift, 0.5);
    const double min_energy = energy_seminorm_sq(lvl.mesh, dm, minimizer, 0.5);
    CHECK(lift_energy >= min_energy - 1e-12);
  }
}

TEST_SUITE_END();
