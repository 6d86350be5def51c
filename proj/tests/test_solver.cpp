#include "stokes/solver.hpp"
#include "stokes/validation.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include "test_helpers.hpp"

using namespace stokes;

namespace {

Eigen::VectorXd exact_velocity(const DofMap& dm, const ChannelParams& params) {
  return test_oracle::interpolate_velocity(
      dm, [&](const Vec2& x) { return poiseuille(x, params).velocity; });
}

Eigen::VectorXd exact_pressure(const TriMesh& mesh, const ChannelParams& params) {
  return test_oracle::interpolate_pressure(
      mesh, [&](const Vec2& x) { return poiseuille(x, params).pressure; });
}

TractionField poiseuille_g(const ChannelParams& params) {
  return [params](const Vec2& x, const Vec2& n, int) { return poiseuille_traction(x, n, params); };
}

VectorField poiseuille_h(const ChannelParams& params) {
  return [params](const Vec2& x) { return poiseuille(x, params).velocity; };
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("zero data gives the zero solution") {
  const TriMesh mesh = build_rect_mesh(2, 1, 2, 2);
  const BoundaryPartition part = partition_boundary(mesh, {3, 4});
  const Solution sol = solve({mesh, part, 1.0, nullptr, nullptr, nullptr});
  CHECK(sol.u.norm() == 0.0);
  CHECK(sol.p.norm() == 0.0);
  CHECK(sol.regime == Regime::mixed);
}

TEST_CASE("mixed regime reproduces poiseuille exactly") {
  const ChannelParams params;
  for (auto [nx, ny] : {std::pair{1, 1}, {4, 2}, {16, 8}}) {
    const TriMesh mesh = build_rect_mesh(params.L, params.H, nx, ny);
    const BoundaryPartition part = partition_boundary(mesh, {3, 4});
    const Solution sol =
        solve({mesh, part, params.mu, nullptr, poiseuille_g(params), poiseuille_h(params)});

    const DofMap dm = build_taylor_hood(mesh, part);
    CHECK((sol.u - exact_velocity(dm, params)).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK((sol.p - exact_pressure(mesh, params)).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK(sol.residual_norm < 1e-10);
    CHECK(sol.div_residual < 1e-10);
  }
}

TEST_CASE("solve rejects the wrong regime") {
  const TriMesh mesh = build_rect_mesh(2, 1, 2, 2);
  const BoundaryPartition all = partition_boundary(mesh, {1, 2, 3, 4});
  CHECK_THROWS_AS(solve({mesh, all, 1.0, nullptr, nullptr, nullptr}), std::invalid_argument);
  const BoundaryPartition none = partition_boundary(mesh, {});
  CHECK_THROWS_AS(solve_dirichlet({mesh, none, 1.0, nullptr, nullptr, nullptr}),
                  std::invalid_argument);
  const BoundaryPartition walls = partition_boundary(mesh, {3, 4});
  CHECK_THROWS_AS(solve_neumann({mesh, walls, 1.0, nullptr, nullptr, nullptr}),
                  std::invalid_argument);
}

TEST_CASE("dirichlet regime with the poiseuille trace") {
  const ChannelParams params;
  const TriMesh mesh = build_rect_mesh(params.L, params.H, 8, 4);
  const BoundaryPartition part = partition_boundary(mesh, {1, 2, 3, 4});

  CHECK(std::abs(dirichlet_flux(mesh, poiseuille_h(params))) < 1e-12);

  const Solution sol =
      solve_dirichlet({mesh, part, params.mu, nullptr, nullptr, poiseuille_h(params)});
  const DofMap dm = build_taylor_hood(mesh, part);
  CHECK((sol.u - exact_velocity(dm, params)).lpNorm<Eigen::Infinity>() < 1e-9);

  // Pressure is the zero-mean representative: p_ref - mean(p_ref) with
  // mean(p_ref) = (p_in + p_out) / 2 = 0.5 on the 2x1 channel.
  const Eigen::VectorXd p_expected = exact_pressure(mesh, params).array() - 0.5;
  CHECK((sol.p - p_expected).lpNorm<Eigen::Infinity>() < 1e-9);

  // Pinned representative really has zero mean.
  const DofMap dm2 = build_taylor_hood(mesh, part);
  const SparseMat mp = pressure_mass_matrix(mesh, dm2);
  CHECK(std::abs((mp * Eigen::VectorXd::Ones(mesh.n_vertices())).dot(sol.p)) < 1e-10);
}

TEST_CASE("dirichlet regime flags a net flux datum") {
  const TriMesh mesh = build_rect_mesh(2, 1, 4, 2);
  const BoundaryPartition part = partition_boundary(mesh, {1, 2, 3, 4});
  // div h = 0.5 everywhere: net flux = 0.5 * area = 1.
  const VectorField h = [](const Vec2& x) { return Vec2(0.5 * x.x(), 0.0); };
  CHECK(dirichlet_flux(mesh, h) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(solve_dirichlet({mesh, part, 1.0, nullptr, nullptr, h}),
                  IncompatibleDataError);
}

TEST_CASE("dirichlet regime with a rigid translation trace") {
  const TriMesh mesh = build_rect_mesh(2, 1, 2, 1);
  const BoundaryPartition part = partition_boundary(mesh, {1, 2, 3, 4});
  const VectorField h = [](const Vec2&) { return Vec2(1.0, 0.0); };
  const Solution sol = solve_dirichlet({mesh, part, 1.0, nullptr, nullptr, h});
  // sigma = -c I solves the system exactly; the pinned pressure is zero.
  const DofMap dm = build_taylor_hood(mesh, part);
  const Eigen::VectorXd expected = test_oracle::interpolate_velocity(dm, h);
  CHECK((sol.u - expected).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK(sol.p.lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("dirichlet regime with a rigid rotation trace") {
  const TriMesh mesh = build_rect_mesh(2, 1, 4, 2);
  const BoundaryPartition part = partition_boundary(mesh, {1, 2, 3, 4});
  const VectorField h = [](const Vec2& x) { return Vec2(-x.y(), x.x()); };
  const Solution sol = solve_dirichlet({mesh, part, 1.0, nullptr, nullptr, h});

  const DofMap dm = build_taylor_hood(mesh, part);
  const Eigen::VectorXd expected = test_oracle::interpolate_velocity(dm, h);
  CHECK((sol.u - expected).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK(sol.p.lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("neumann regime: hydrostatic load") {
  const TriMesh mesh = build_rect_mesh(2, 1, 4, 2);
  const BoundaryPartition part = partition_boundary(mesh, {});
  const double c = 2.5;
  const TractionField g = [c](const Vec2&, const Vec2& n, int) {
    return Vec2(-c * n.x(), -c * n.y());
  };

  const auto defects = neumann_defects(mesh, part, nullptr, g);
  CHECK(std::abs(defects[0]) < 1e-12);
  CHECK(std::abs(defects[1]) < 1e-12);
  CHECK(std::abs(defects[2]) < 1e-12);

  const Solution sol = solve_neumann({mesh, part, 1.0, nullptr, g, nullptr});
  CHECK(sol.u.lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK((sol.p.array() - c).abs().maxCoeff() < 1e-9);
}

TEST_CASE("neumann regime flags unbalanced body force") {
  const TriMesh mesh = build_rect_mesh(2, 1, 4, 2);
  const BoundaryPartition part = partition_boundary(mesh, {});
  const VectorField f = [](const Vec2&) { return Vec2(0.0, -1.0); };
  const auto defects = neumann_defects(mesh, part, f, nullptr);
  CHECK(defects[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(defects[1] == doctest::Approx(-2.0).epsilon(1e-12));  // (0, -area)
  try {
    solve_neumann({mesh, part, 1.0, f, nullptr, nullptr});
    FAIL("expected IncompatibleDataError");
  } catch (const IncompatibleDataError& e) {
    REQUIRE(e.defects().size() == 3);
    CHECK(e.defects()[1] == doctest::Approx(-2.0).epsilon(1e-9));
  }
}

TEST_CASE("neumann regime with the full poiseuille traction") {
  const ChannelParams params;
  const TriMesh mesh = build_rect_mesh(params.L, params.H, 8, 4);
  const BoundaryPartition part = partition_boundary(mesh, {});
  const Solution sol =
      solve_neumann({mesh, part, params.mu, nullptr, poiseuille_g(params), nullptr});

  // Pressure is unique, no mean shift.
  CHECK((sol.p - exact_pressure(mesh, params)).lpNorm<Eigen::Infinity>() < 1e-9);

  // Velocity matches the exact field modulo rigid modes: project the
  // difference onto the orthogonal complement of the modes.
  const DofMap dm = build_taylor_hood(mesh, part);
  const SparseMat h1 = velocity_h1_matrix(mesh, dm);
  const RigidModes modes = rigid_modes(dm);
  Eigen::MatrixXd basis(dm.n_vel_dofs(), 3);
  for (int k = 0; k < 3; ++k) basis.col(k) = modes.modes[k];
  const Eigen::MatrixXd gram = basis.transpose() * (h1 * basis);
  const Eigen::VectorXd diff = sol.u - exact_velocity(dm, params);
  const Eigen::VectorXd coeff = gram.ldlt().solve(basis.transpose() * (h1 * diff));
  const Eigen::VectorXd residue = diff - basis * coeff;
  CHECK(std::sqrt(residue.dot(h1 * residue)) < 1e-9);

  // The pinned representative is H1-orthogonal to every rigid mode.
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(modes.modes[k].dot(h1 * sol.u)) < 1e-10);
  }
}

TEST_CASE("gauge shifts leave the residual untouched") {
  const ChannelParams params;

  SUBCASE("constant pressure shift in the dirichlet regime") {
    const TriMesh mesh = build_rect_mesh(2, 1, 4, 2);
    const BoundaryPartition part = partition_boundary(mesh, {1, 2, 3, 4});
    DofMap dm = build_taylor_hood(mesh, part);
    interpolate_boundary_velocity(dm, poiseuille_h(params));
    SaddleSystem sys = assemble_system(mesh, dm, part, params.mu, nullptr, nullptr);
    apply_dirichlet_lift(sys, dm);

    const Solution sol =
        solve_dirichlet({mesh, part, params.mu, nullptr, nullptr, poiseuille_h(params)});
    Eigen::VectorXd u_free(sys.n_free());
    for (int k = 0; k < sys.n_free(); ++k) u_free[k] = sol.u[sys.free_dofs[k]];

    const auto momentum_residual = [&](const Eigen::VectorXd& p) {
      return (sys.A_ff * u_free + sys.B_f.transpose() * p - sys.rhs_vel_f).norm();
    };
    const double base = momentum_residual(sol.p);
    const double shifted = momentum_residual(sol.p + 17.0 * Eigen::VectorXd::Ones(sol.p.size()));
    CHECK(std::abs(base - shifted) < 1e-9);
  }

  SUBCASE("rigid mode shift in the neumann regime") {
    const TriMesh mesh = build_rect_mesh(2, 1, 4, 2);
    const BoundaryPartition part = partition_boundary(mesh, {});
    DofMap dm = build_taylor_hood(mesh, part);
    SaddleSystem sys =
        assemble_system(mesh, dm, part, params.mu, nullptr, poiseuille_g(params));
    apply_dirichlet_lift(sys, dm);

    const Solution sol =
        solve_neumann({mesh, part, params.mu, nullptr, poiseuille_g(params), nullptr});
    const RigidModes modes = rigid_modes(dm);
    const auto residual = [&](const Eigen::VectorXd& u) {
      const double mom = (sys.A * u + SparseMat(sys.B.transpose()) * sol.p - sys.rhs_vel).norm();
      const double div = (sys.B * u).norm();
      return mom + div;
    };
    const double base = residual(sol.u);
    const double shifted = residual(sol.u + 3.0 * modes.modes[2]);
    CHECK(std::abs(base - shifted) < 1e-8);
  }
}

TEST_CASE("superposition of the three data channels") {
  const TriMesh mesh = build_rect_mesh(2, 1, 8, 4);
  const BoundaryPartition part = partition_boundary(mesh, {3, 4});

  SUBCASE("zero body force contributes zero fields") {
    const ChannelParams params;
    const StokesProblem prob{mesh, part, params.mu, nullptr, poiseuille_g(params),
                             poiseuille_h(params)};
    const Solution sf = solve({mesh, part, params.mu, nullptr, nullptr, nullptr});
    CHECK(sf.u.norm() == 0.0);
    CHECK(sf.p.norm() == 0.0);
  }

  SUBCASE("random data superpose to solver accuracy") {
    for (unsigned seed : {11u, 12u, 13u}) {
      const test_oracle::RandomPolyData data(seed);
      const StokesProblem prob{mesh, part, 1.0, data.f(), data.g(), data.h()};
      const SuperpositionCheck check = superposition_check(prob);
      CHECK(check.u_h1_discrepancy < 1e-9);
      CHECK(check.p_l2_discrepancy < 1e-9);
    }
  }
}

TEST_CASE("linear_solve matches a dense factorization oracle") {
  const ChannelParams params;
  const TriMesh mesh = build_rect_mesh(2, 1, 1, 1);
  const BoundaryPartition part = partition_boundary(mesh, {3, 4});
  DofMap dm = build_taylor_hood(mesh, part);
  interpolate_boundary_velocity(dm, poiseuille_h(params));
  SaddleSystem sys = assemble_system(mesh, dm, part, params.mu, nullptr, poiseuille_g(params));
  apply_dirichlet_lift(sys, dm);

  const LinearSolveResult result = linear_solve(sys);

  const int nf = sys.n_free();
  const int np = dm.n_pre_dofs();
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(nf + np, nf + np);
  dense.topLeftCorner(nf, nf) = Eigen::MatrixXd(sys.A_ff);
  dense.topRightCorner(nf, np) = Eigen::MatrixXd(sys.B_f).transpose();
  dense.bottomLeftCorner(np, nf) = Eigen::MatrixXd(sys.B_f);
  Eigen::VectorXd rhs(nf + np);
  rhs.head(nf) = sys.rhs_vel_f;
  rhs.tail(np) = sys.rhs_pre_f;
  const Eigen::VectorXd z = Eigen::FullPivLU<Eigen::MatrixXd>(dense).solve(rhs);

  CHECK((result.u_free - z.head(nf)).lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK((result.p - z.tail(np)).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("minres agrees with the dense oracle on the two-triangle problem") {
  const ChannelParams params;
  const TriMesh mesh = build_rect_mesh(2, 1, 1, 1);
  const BoundaryPartition part = partition_boundary(mesh, {3, 4});
  DofMap dm = build_taylor_hood(mesh, part);
  SaddleSystem sys = assemble_system(mesh, dm, part, params.mu, nullptr, poiseuille_g(params));
  apply_dirichlet_lift(sys, dm);

  SolverOptions opts;
  opts.method = SolveMethod::minres;
  opts.tol = 1e-11;
  const LinearSolveResult it = linear_solve(sys, opts);
  const LinearSolveResult direct = linear_solve(sys);
  CHECK((it.u_free - direct.u_free).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK((it.p - direct.p).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK(it.iterations > 0);
}

TEST_CASE("linear_solve short-circuits on a zero right-hand side") {
  const TriMesh mesh = build_rect_mesh(2, 1, 2, 1);
  const BoundaryPartition part = partition_boundary(mesh, {3, 4});
  DofMap dm = build_taylor_hood(mesh, part);
  SaddleSystem sys = assemble_system(mesh, dm, part, 1.0, nullptr, nullptr);
  apply_dirichlet_lift(sys, dm);
  const LinearSolveResult result = linear_solve(sys);
  CHECK(result.u_free.norm() == 0.0);
  CHECK(result.p.norm() == 0.0);
  CHECK(result.iterations == 0);
}

TEST_CASE("missing pressure pinning is detected as a breakdown") {
  // Pure Dirichlet without the mean row leaves the constant pressure in the
  // kernel; the factorization or the residual check must fail.
  const ChannelParams params;
  const TriMesh mesh = build_rect_mesh(2, 1, 2, 1);
  const BoundaryPartition part = partition_boundary(mesh, {1, 2, 3, 4});
  DofMap dm = build_taylor_hood(mesh, part);
  interpolate_boundary_velocity(dm, poiseuille_h(params));
  SaddleSystem sys = assemble_system(mesh, dm, part, params.mu, nullptr, nullptr);
  apply_dirichlet_lift(sys, dm);
  CHECK_THROWS_AS(linear_solve(sys), NumericalBreakdownError);
}

TEST_CASE("mixed saddle matrix has full rank on the coarse mesh") {
  const TriMesh mesh = build_rect_mesh(2, 1, 2, 1);
  const BoundaryPartition part = partition_boundary(mesh, {3, 4});
  DofMap dm = build_taylor_hood(mesh, part);
  SaddleSystem sys = assemble_system(mesh, dm, part, 1.0, nullptr, nullptr);
  apply_dirichlet_lift(sys, dm);

  const int nf = sys.n_free();
  const int np = dm.n_pre_dofs();
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(nf + np, nf + np);
  dense.topLeftCorner(nf, nf) = Eigen::MatrixXd(sys.A_ff);
  dense.topRightCorner(nf, np) = Eigen::MatrixXd(sys.B_f).transpose();
  dense.bottomLeftCorner(np, nf) = Eigen::MatrixXd(sys.B_f);
  CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(dense).rank() == nf + np);
}

TEST_CASE("minres path agrees with the direct path") {
  const ChannelParams params;
  const TriMesh mesh = build_rect_mesh(params.L, params.H, 8, 4);
  const BoundaryPartition part = partition_boundary(mesh, {3, 4});
  const TractionField g = [&](const Vec2&, const Vec2& n, int tag) {
    const double p = tag == 1 ? params.p_in : params.p_out;
    return Vec2(-p * n.x(), -p * n.y());
  };
  SolverOptions direct;
  SolverOptions minres;
  minres.method = SolveMethod::minres;
  minres.tol = 1e-9;
  const Solution a = solve({mesh, part, params.mu, nullptr, g, nullptr}, direct);
  const Solution b = solve({mesh, part, params.mu, nullptr, g, nullptr}, minres);
  CHECK((a.u - b.u).lpNorm<Eigen::Infinity>() < 1e-7);
  CHECK((a.p - b.p).lpNorm<Eigen::Infinity>() < 1e-7);
}

TEST_CASE("stability report sees tag-dependent traction data") {
  // The normal-stress preset returns zero for unknown tags; the data norm
  // must be computed with the true tag at each boundary quadrature point.
  const ChannelParams params;
  const ChannelSolve run = solve_normal_stress_channel(params, 8, 4);
  CHECK(run.solution.stability.g_l2 > 0.5);
  CHECK(run.solution.stability.ratio > 0.0);
}

TEST_CASE("stability ratio stays bounded under refinement") {
  // Light version of the acceptance criterion: same random data on two
  // nested meshes, ratio change bounded.
  for (unsigned seed : {21u, 22u, 23u, 24u, 25u}) {
    const test_oracle::RandomPolyData data(seed);
    double ratios[2];
    int idx = 0;
    for (auto [nx, ny] : {std::pair{8, 4}, {16, 8}}) {
      const TriMesh mesh = build_rect_mesh(2, 1, nx, ny);
      const BoundaryPartition part = partition_boundary(mesh, {3, 4});
      const Solution sol = solve({mesh, part, 1.0, data.f(), data.g(), data.h()});
      ratios[idx++] = sol.stability.ratio;
    }
    CHECK(std::max(ratios[0], ratios[1]) < 3.0 * std::min(ratios[0], ratios[1]));
  }
}

TEST_SUITE_END();
