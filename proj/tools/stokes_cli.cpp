// Command line front end: solve, validate, constants, asymptotics and
// mesh-export subcommands over the key=value run configuration.

#include "stokes/analysis.hpp"
#include "stokes/config.hpp"
#include "stokes/fields.hpp"
#include "stokes/mesh_io.hpp"
#include "stokes/solution_io.hpp"
#include "stokes/solver.hpp"
#include "stokes/validation.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace stokes;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitIncompatible = 2;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int threads = 0;
  double tol = 0.0;
};

RunConfig load_config(const CommonArgs& args) {
  RunConfig cfg = args.config_path.empty() ? RunConfig{} : parse_config(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.tol > 0.0) cfg.solver.tol = args.tol;
  if (args.threads > 0) Eigen::setNbThreads(args.threads);
  fs::create_directories(cfg.out_dir);
  return cfg;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int run_solve(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  const ProblemSetup setup = make_problem(cfg);
  const StokesProblem problem{setup.mesh, setup.partition, setup.mu, setup.f, setup.g, setup.h};
  const Solution solution = solve_problem(problem, cfg.solver);

  const DofMap dofmap = build_taylor_hood(setup.mesh, setup.partition);
  std::vector<std::pair<std::string, std::string>> extra;
  if (cfg.probe) {
    extra.emplace_back("probe_x", fmt(cfg.probe->x()));
    extra.emplace_back("probe_y", fmt(cfg.probe->y()));
    extra.emplace_back("probe_p", fmt(evaluate_pressure(setup.mesh, dofmap, solution.p,
                                                        *cfg.probe)));
    const Vec2 u = evaluate_velocity(setup.mesh, dofmap, solution.u, *cfg.probe);
    extra.emplace_back("probe_u1", fmt(u.x()));
    extra.emplace_back("probe_u2", fmt(u.y()));
  }

  if (cfg.formats.count("vtk")) {
    write_solution_vtk(setup.mesh, dofmap, solution, setup.mu,
                       (fs::path(cfg.out_dir) / "solution.vtk").string());
  }
  if (cfg.formats.count("report")) {
    write_solution_report(solution, (fs::path(cfg.out_dir) / "report.txt").string(), extra);
  }
  if (cfg.formats.count("matrix")) {
    DofMap constrained = build_taylor_hood(setup.mesh, setup.partition);
    if (setup.h) interpolate_boundary_velocity(constrained, setup.h);
    SaddleSystem sys = assemble_system(setup.mesh, constrained, setup.partition, setup.mu,
                                       setup.f, setup.g);
    write_matrix_market(sys.A, (fs::path(cfg.out_dir) / "viscous.mtx").string());
    write_matrix_market(sys.B, (fs::path(cfg.out_dir) / "divergence.mtx").string());
  }

  std::cout << "regime=" << regime_name(solution.regime)
            << " residual=" << fmt(solution.residual_norm)
            << " ratio=" << fmt(solution.stability.ratio) << '\n';
  return kExitOk;
}

int run_validate(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  const ChannelParams params = channel_params(cfg);

  const ChannelSolve run = solve_normal_stress_channel(params, cfg.val_nx, cfg.val_ny,
                                                       DiagonalPattern::mirrored, cfg.solver);
  const PoiseuilleComparison cmp = compare_to_poiseuille(run.mesh, run.dofmap, run.solution,
                                                         params, cfg.samples_x, cfg.samples_y);
  write_comparison_csv((fs::path(cfg.out_dir) / "comparison.csv").string(), cmp);

  const Vec2 probe(0.5 * params.L, 0.5 * params.H);
  const double probe_p = evaluate_pressure(run.mesh, run.dofmap, run.solution.p, probe);
  write_solution_report(run.solution, (fs::path(cfg.out_dir) / "report.txt").string(),
                        {{"probe_x", fmt(probe.x())},
                         {"probe_y", fmt(probe.y())},
                         {"probe_p", fmt(probe_p)},
                         {"vel_l2_rel", fmt(cmp.vel_l2_rel)},
                         {"pre_band_left", fmt(cmp.band_pressure_dev[0])},
                         {"pre_band_mid", fmt(cmp.band_pressure_dev[1])},
                         {"pre_band_right", fmt(cmp.band_pressure_dev[2])}});

  bool ok = true;
  const double mid_expected = 0.5 * (params.p_in + params.p_out);
  if (std::abs(probe_p - mid_expected) > 0.02 * std::max(1.0, std::abs(mid_expected))) ok = false;
  if (!(cmp.band_pressure_dev[0] > cmp.band_pressure_dev[1] &&
        cmp.band_pressure_dev[2] > cmp.band_pressure_dev[1])) {
    ok = false;
  }
  if (!(cmp.vel_l2_rel < 0.15)) ok = false;

  std::cout << "probe_p=" << fmt(probe_p) << " vel_l2_rel=" << fmt(cmp.vel_l2_rel)
            << " bands=" << fmt(cmp.band_pressure_dev[0]) << '/'
            << fmt(cmp.band_pressure_dev[1]) << '/' << fmt(cmp.band_pressure_dev[2])
            << (ok ? " ok" : " FAILED") << '\n';
  return ok ? kExitOk : kExitError;
}

int run_constants(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  std::vector<ConstantRow> rows;
  for (int level = 0; level < cfg.levels; ++level) {
    const int nx = cfg.base_nx << level;
    const int ny = cfg.base_ny << level;
    const TriMesh mesh = build_rect_mesh(cfg.L, cfg.H, nx, ny, cfg.pattern);
    const BoundaryPartition partition = partition_boundary(mesh, cfg.dirichlet_tags);
    const DofMap dofmap = build_taylor_hood(mesh, partition);
    for (const auto& q : cfg.quantities) {
      ConstantReport report;
      if (q == "korn3") report = korn_constant(mesh, dofmap, partition, level);
      else if (q == "korn1") report = korn_first_constant(mesh, dofmap, level);
      else if (q == "infsup") report = infsup_constant(mesh, dofmap, partition, level);
      else if (q == "lambda1") report = lambda1(mesh, dofmap, partition, level);
      else throw std::invalid_argument("constants: unknown quantity '" + q + "'");
      rows.push_back(ConstantRow{level, mesh.max_edge_length(), report.quantity, report.value});
      std::cout << "level=" << level << " quantity=" << quantity_name(report.quantity)
                << " value=" << fmt(report.value) << '\n';
    }
  }
  write_constants_csv((fs::path(cfg.out_dir) / "constants.csv").string(), rows);
  return kExitOk;
}

int run_asymptotics(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  ChannelParams base = channel_params(cfg);
  const std::vector<AsymptoticRow> rows = asymptotic_study(cfg.heights, base, cfg.asym_ny,
                                                           cfg.solver);
  write_asymptotics_csv((fs::path(cfg.out_dir) / "asymptotics.csv").string(), rows);

  // The discrepancies must shrink with the height, row group by row group;
  // moments already at the limit to machine precision count as converged.
  const auto converged = [](double next, double prev) {
    return next < prev || (next < 1e-12 && prev < 1e-12);
  };
  bool ok = true;
  const std::size_t per_height = 4;
  for (std::size_t k = per_height; k < rows.size(); ++k) {
    const AsymptoticRow& prev = rows[k - per_height];
    const AsymptoticRow& cur = rows[k];
    if (!converged(cur.discrepancy_u, prev.discrepancy_u) ||
        !converged(cur.discrepancy_p, prev.discrepancy_p)) {
      ok = false;
    }
  }
  for (const auto& r : rows) {
    std::cout << "H=" << fmt(r.H) << " phi=" << r.phi << " du=" << fmt(r.discrepancy_u)
              << " dp=" << fmt(r.discrepancy_p) << '\n';
  }
  std::cout << (ok ? "monotone" : "NOT monotone") << '\n';
  return ok ? kExitOk : kExitError;
}

int run_mesh_export(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  const TriMesh mesh = cfg.mesh_file.empty()
                           ? build_rect_mesh(cfg.L, cfg.H, cfg.nx, cfg.ny, cfg.pattern)
                           : read_mesh_text(cfg.mesh_file);
  write_mesh_vtk(mesh, (fs::path(cfg.out_dir) / "mesh.vtk").string());
  write_mesh_text(mesh, (fs::path(cfg.out_dir) / "mesh.txt").string());
  std::cout << "vertices=" << mesh.n_vertices() << " triangles=" << mesh.n_triangles()
            << " edges=" << mesh.n_edges() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D Stokes solver with kinematic, dynamic and mixed boundary conditions"};
  app.require_subcommand(1);

  CommonArgs args;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", args.config_path, "configuration file");
    cmd->add_option("--out", args.out_dir, "output directory (overrides the config)");
    cmd->add_option("--threads", args.threads, "thread count for linear algebra kernels");
    cmd->add_option("--tol", args.tol, "relative residual tolerance (overrides the config)");
  };

  CLI::App* cmd_solve = app.add_subcommand("solve", "solve the configured problem");
  CLI::App* cmd_validate =
      app.add_subcommand("validate", "channel experiment against the Poiseuille reference");
  CLI::App* cmd_constants =
      app.add_subcommand("constants", "Korn / inf-sup / eigenvalue sweeps over mesh levels");
  CLI::App* cmd_asymptotics =
      app.add_subcommand("asymptotics", "thin-channel moment study over decreasing heights");
  CLI::App* cmd_mesh = app.add_subcommand("mesh-export", "write the configured mesh to disk");
  for (CLI::App* cmd : {cmd_solve, cmd_validate, cmd_constants, cmd_asymptotics, cmd_mesh}) {
    add_common(cmd);
  }
  int result = kExitOk;
  cmd_solve->callback([&] { result = run_solve(args); });
  cmd_validate->callback([&] { result = run_validate(args); });
  cmd_constants->callback([&] { result = run_constants(args); });
  cmd_asymptotics->callback([&] { result = run_asymptotics(args); });
  cmd_mesh->callback([&] { result = run_mesh_export(args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const IncompatibleDataError& e) {
    std::cerr << "error (incompatible data): " << e.what() << '\n';
    return kExitIncompatible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return result;
}
