#include "stokes/solver.hpp"

#include "stokes/log.hpp"
#include "stokes/quadrature.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stokes {

namespace {

using logging::Level;
using logging::str;

template <class F>
void for_each_volume_qpoint(const TriMesh& mesh, F&& fn) {
  const auto rule = triangle_quadrature_degree4();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Vec2& a = mesh.vertices()[tri[0]];
    const Vec2& b = mesh.vertices()[tri[1]];
    const Vec2& c = mesh.vertices()[tri[2]];
    for (const auto& rp : rule) {
      fn(Vec2(rp.l0 * a + rp.l1 * b + rp.l2 * c), rp.weight * mesh.triangle_area(t));
    }
  }
}

Eigen::VectorXd pressure_mean_functional(const SparseMat& pressure_mass) {
  // Row sums of the mass matrix = integrals of the P1 basis functions.
  return pressure_mass * Eigen::VectorXd::Ones(pressure_mass.cols());
}

// Assembles the symmetric block matrix
//   [ A_ff  B_f^T  C^T ]
//   [ B_f   0      D^T ]
//   [ C     D      0   ]
// where C are the velocity pinning rows and D the pressure pinning rows.
SparseMat build_block_matrix(const SaddleSystem& sys) {
  const int nf = sys.n_free();
  const int np = static_cast<int>(sys.B_f.rows());
  const int nvp = static_cast<int>(sys.velocity_pins.size());
  const int npp = static_cast<int>(sys.pressure_pins.size());
  const int n = nf + np + nvp + npp;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(sys.A_ff.nonZeros() + 2 * sys.B_f.nonZeros() + 2 * (nvp * nf + npp * np));

  for (int k = 0; k < sys.A_ff.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(sys.A_ff, k); it; ++it) {
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int k = 0; k < sys.B_f.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(sys.B_f, k); it; ++it) {
      const int r = nf + static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      trips.emplace_back(r, c, it.value());
      trips.emplace_back(c, r, it.value());
    }
  }
  for (int m = 0; m < nvp; ++m) {
    const int r = nf + np + m;
    const Eigen::VectorXd& pin = sys.velocity_pins[m];
    for (int j = 0; j < nf; ++j) {
      if (pin[j] != 0.0) {
        trips.emplace_back(r, j, pin[j]);
        trips.emplace_back(j, r, pin[j]);
      }
    }
  }
  for (int m = 0; m < npp; ++m) {
    const int r = nf + np + nvp + m;
    const Eigen::VectorXd& pin = sys.pressure_pins[m];
    for (int j = 0; j < np; ++j) {
      if (pin[j] != 0.0) {
        trips.emplace_back(r, nf + j, pin[j]);
        trips.emplace_back(nf + j, r, pin[j]);
      }
    }
  }

  SparseMat K(n, n);
  K.setFromTriplets(trips.begin(), trips.end());
  K.makeCompressed();
  return K;
}

// Block-diagonal SPD preconditioner for the Krylov path: incomplete
// Cholesky on the viscous block, pressure mass scaled by 1/(2 mu), identity
// on the multiplier rows.
class BlockPreconditioner {
 public:
  BlockPreconditioner(const SaddleSystem& sys, const SparseMat& pressure_mass, double mu)
      : nf_(sys.n_free()), np_(static_cast<int>(sys.B_f.rows())), two_mu_(2.0 * mu) {
    ic_.compute(sys.A_ff);
    ic_ok_ = ic_.info() == Eigen::Success;
    if (!ic_ok_) {
      diag_ = sys.A_ff.diagonal();
      for (int i = 0; i < diag_.size(); ++i) {
        if (diag_[i] <= 0.0) diag_[i] = 1.0;
      }
    }
    mass_llt_.compute(pressure_mass);
    if (mass_llt_.info() != Eigen::Success) {
      throw NumericalBreakdownError("pressure mass factorization failed");
    }
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& r) const {
    Eigen::VectorXd z(r.size());
    if (ic_ok_) {
      z.head(nf_) = ic_.solve(r.head(nf_));
    } else {
      z.head(nf_) = r.head(nf_).cwiseQuotient(diag_);
    }
    z.segment(nf_, np_) = two_mu_ * mass_llt_.solve(r.segment(nf_, np_));
    const int rest = static_cast<int>(r.size()) - nf_ - np_;
    if (rest > 0) z.tail(rest) = r.tail(rest);
    return z;
  }

 private:
  int nf_, np_;
  double two_mu_;
  bool ic_ok_ = false;
  Eigen::IncompleteCholesky<double> ic_;
  Eigen::VectorXd diag_;
  Eigen::SimplicialLLT<SparseMat> mass_llt_;
};

// Preconditioned MINRES (Paige & Saunders). The preconditioner must be SPD.
Eigen::VectorXd minres_solve(const SparseMat& K, const Eigen::VectorXd& b,
                             const BlockPreconditioner& prec, double tol, int maxit,
                             std::vector<double>& history, int& iterations) {
  const int n = static_cast<int>(b.size());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);

  Eigen::VectorXd r1 = b;
  Eigen::VectorXd y = prec.apply(r1);
  double beta1 = r1.dot(y);
  if (beta1 < 0.0) throw NumericalBreakdownError("minres: preconditioner is not positive");
  if (beta1 == 0.0) {
    iterations = 0;
    return x;
  }
  beta1 = std::sqrt(beta1);

  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0;
  double phibar = beta1, cs = -1.0, sn = 0.0, oldeps = 0.0;
  Eigen::VectorXd r2 = r1;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w2 = Eigen::VectorXd::Zero(n);

  for (int itn = 1; itn <= maxit; ++itn) {
    const Eigen::VectorXd v = y / beta;
    y = K * v;
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = prec.apply(r2);
    oldb = beta;
    beta = r2.dot(y);
    if (beta < 0.0) throw NumericalBreakdownError("minres: lost positivity", history);
    beta = std::sqrt(beta);

    oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    double gamma = std::hypot(gbar, beta);
    gamma = std::max(gamma, std::numeric_limits<double>::epsilon());
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    const Eigen::VectorXd w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    history.push_back(phibar / beta1);
    iterations = itn;
    if (phibar / beta1 <= 0.1 * tol) break;
  }
  return x;
}

struct NormOperators {
  SparseMat velocity_h1;
  SparseMat pressure_mass;
};

double quad_norm(const SparseMat& m, const Eigen::VectorXd& v) {
  return std::sqrt(std::max(0.0, v.dot(m * v)));
}

double field_l2_volume(const TriMesh& mesh, const VectorField& f) {
  if (!f) return 0.0;
  double acc = 0.0;
  for_each_volume_qpoint(mesh, [&](const Vec2& x, double w) { acc += w * f(x).squaredNorm(); });
  return std::sqrt(acc);
}

double field_l2_boundary(const TriMesh& mesh, const BoundaryPartition& partition,
                         const TractionField& g) {
  if (!g || partition.neumann_tags.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& qp : boundary_quadrature(mesh, partition.neumann_tags, 5)) {
    acc += qp.weight * g(qp.point, qp.normal, qp.tag).squaredNorm();
  }
  return std::sqrt(acc);
}

Solution finish_solution(const TriMesh& mesh, const StokesProblem& prob, SaddleSystem& sys,
                         const NormOperators& ops, const LinearSolveResult& lin) {
  Solution sol;
  sol.regime = sys.regime;
  sol.u = reconstruct_velocity(sys, lin.u_free);
  sol.p = lin.p;
  sol.residual_norm = lin.residual;
  sol.div_residual = (sys.B * sol.u - sys.rhs_pre).norm();

  StabilityReport& st = sol.stability;
  st.u_h1 = quad_norm(ops.velocity_h1, sol.u);
  st.p_l2 = quad_norm(ops.pressure_mass, sol.p);
  st.f_l2 = field_l2_volume(mesh, prob.f);
  st.g_l2 = field_l2_boundary(mesh, prob.partition, prob.g);
  st.h_lift_h1 = quad_norm(ops.velocity_h1, sys.prescribed);
  st.data_norm = st.f_l2 + st.g_l2 + st.h_lift_h1;
  const double energy = 2.0 * prob.mu * st.u_h1 + st.p_l2;
  st.ratio = st.data_norm > 0.0 ? energy / st.data_norm : 0.0;

  logging::event(Level::info, "solve",
                 {{"regime", regime_name(sol.regime)},
                  {"residual", str(sol.residual_norm)},
                  {"div_residual", str(sol.div_residual)},
                  {"u_h1", str(st.u_h1)},
                  {"p_l2", str(st.p_l2)},
                  {"ratio", str(st.ratio)}});
  return sol;
}

Solution solve_common(const StokesProblem& prob, const SolverOptions& opts) {
  DofMap dofmap = build_taylor_hood(prob.mesh, prob.partition);
  if (prob.h) interpolate_boundary_velocity(dofmap, prob.h);

  SaddleSystem sys = assemble_system(prob.mesh, dofmap, prob.partition, prob.mu, prob.f, prob.g);
  apply_dirichlet_lift(sys, dofmap);

  NormOperators ops{velocity_h1_matrix(prob.mesh, dofmap),
                    pressure_mass_matrix(prob.mesh, dofmap)};

  if (sys.regime == Regime::dirichlet) {
    sys.pressure_pins.push_back(pressure_mean_functional(ops.pressure_mass));
  } else if (sys.regime == Regime::neumann) {
    const RigidModes rigid = rigid_modes(dofmap);
    for (const auto& mode : rigid.modes) {
      const Eigen::VectorXd full = ops.velocity_h1 * mode;
      Eigen::VectorXd pin(sys.n_free());
      for (int k = 0; k < sys.n_free(); ++k) pin[k] = full[sys.free_dofs[k]];
      sys.velocity_pins.push_back(std::move(pin));
    }
  }

  const LinearSolveResult lin = linear_solve(sys, opts);
  return finish_solution(prob.mesh, prob, sys, ops, lin);
}

}  // namespace

double dirichlet_flux(const TriMesh& mesh, const VectorField& h) {
  if (!h) return 0.0;
  double flux = 0.0;
  for (const auto& qp : boundary_quadrature(mesh, mesh.boundary_tag_set(), 5)) {
    flux += qp.weight * h(qp.point).dot(qp.normal);
  }
  return flux;
}

std::array<double, 3> neumann_defects(const TriMesh& mesh, const BoundaryPartition& partition,
                                      const VectorField& f, const TractionField& g) {
  std::array<double, 3> defects = {0.0, 0.0, 0.0};
  const auto rigid = [](int k, const Vec2& x) {
    switch (k) {
      case 0: return Vec2(1.0, 0.0);
      case 1: return Vec2(0.0, 1.0);
      default: return Vec2(-x.y(), x.x());
    }
  };
  if (f) {
    for_each_volume_qpoint(mesh, [&](const Vec2& x, double w) {
      const Vec2 fx = f(x);
      for (int k = 0; k < 3; ++k) defects[k] += w * fx.dot(rigid(k, x));
    });
  }
  if (g && !partition.neumann_tags.empty()) {
    for (const auto& qp : boundary_quadrature(mesh, partition.neumann_tags, 5)) {
      const Vec2 gx = g(qp.point, qp.normal, qp.tag);
      for (int k = 0; k < 3; ++k) defects[k] -= qp.weight * gx.dot(rigid(k, qp.point));
    }
  }
  return defects;
}

LinearSolveResult linear_solve(const SaddleSystem& sys, const SolverOptions& opts) {
  if (!sys.eliminated) {
    throw std::invalid_argument("linear_solve: apply_dirichlet_lift must run first");
  }
  const int nf = sys.n_free();
  const int np = static_cast<int>(sys.B_f.rows());
  const int npin = static_cast<int>(sys.velocity_pins.size() + sys.pressure_pins.size());
  const int n = nf + np + npin;

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs.head(nf) = sys.rhs_vel_f;
  rhs.segment(nf, np) = sys.rhs_pre_f;

  LinearSolveResult result;
  result.u_free = Eigen::VectorXd::Zero(nf);
  result.p = Eigen::VectorXd::Zero(np);
  result.multipliers = Eigen::VectorXd::Zero(npin);

  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return result;

  const SparseMat K = build_block_matrix(sys);

  SolveMethod method = opts.method;
  if (method == SolveMethod::automatic) {
    method = n < 200000 ? SolveMethod::direct : SolveMethod::minres;
  }

  Eigen::VectorXd z;
  std::vector<double> history;
  if (method == SolveMethod::direct) {
    Eigen::SparseLU<SparseMat> lu;
    lu.analyzePattern(K);
    lu.factorize(K);
    if (lu.info() != Eigen::Success) {
      throw NumericalBreakdownError(
          "linear_solve: singular or ill-conditioned block system (factorization failed)");
    }
    z = lu.solve(rhs);
  } else {
    if (sys.pressure_mass.rows() != np) {
      throw std::invalid_argument("linear_solve: minres needs the system's pressure mass matrix");
    }
    BlockPreconditioner prec(sys, sys.pressure_mass, sys.mu);
    const int cap = opts.max_iterations > 0 ? opts.max_iterations : std::max(2000, 4 * n);
    z = minres_solve(K, rhs, prec, opts.tol, cap, history, result.iterations);
  }

  if (!z.allFinite()) {
    throw NumericalBreakdownError("linear_solve: non-finite solution", history);
  }
  result.residual = (K * z - rhs).norm() / rhs_norm;
  if (result.residual > opts.tol) {
    throw NumericalBreakdownError(
        "linear_solve: residual " + std::to_string(result.residual) + " above tolerance",
        history.empty() ? std::vector<double>{result.residual} : history);
  }

  result.u_free = z.head(nf);
  result.p = z.segment(nf, np);
  result.multipliers = z.tail(npin);

  logging::event(Level::debug, "linear_solve",
                 {{"n", str(n)},
                  {"method", method == SolveMethod::direct ? "direct" : "minres"},
                  {"residual", str(result.residual)},
                  {"iterations", str(result.iterations)}});
  return result;
}

Solution solve(const StokesProblem& prob, const SolverOptions& opts) {
  if (prob.partition.regime != Regime::mixed) {
    throw std::invalid_argument("solve: both boundary measures must be positive (mixed regime)");
  }
  return solve_common(prob, opts);
}

Solution solve_dirichlet(const StokesProblem& prob, const SolverOptions& opts) {
  if (prob.partition.regime != Regime::dirichlet) {
    throw std::invalid_argument("solve_dirichlet: the whole boundary must be Dirichlet-tagged");
  }
  const double flux = dirichlet_flux(prob.mesh, prob.h);
  double scale = 0.0;
  if (prob.h) {
    for (const auto& qp : boundary_quadrature(prob.mesh, prob.mesh.boundary_tag_set(), 5)) {
      scale += qp.weight * prob.h(qp.point).norm();
    }
  }
  if (std::abs(flux) > 1e-8 * std::max(scale, 1e-30)) {
    throw IncompatibleDataError(
        "solve_dirichlet: boundary datum violates the zero-flux compatibility condition, "
        "int h.n dS = " + std::to_string(flux) + " != 0",
        {flux});
  }
  return solve_common(prob, opts);
}

Solution solve_neumann(const StokesProblem& prob, const SolverOptions& opts) {
  if (prob.partition.regime != Regime::neumann) {
    throw std::invalid_argument("solve_neumann: the boundary must carry no Dirichlet tags");
  }
  const std::array<double, 3> defects = neumann_defects(prob.mesh, prob.partition, prob.f, prob.g);

  // Per-mode data scale: the same integrals with absolute values.
  std::array<double, 3> scales = {0.0, 0.0, 0.0};
  const auto rigid = [](int k, const Vec2& x) {
    switch (k) {
      case 0: return Vec2(1.0, 0.0);
      case 1: return Vec2(0.0, 1.0);
      default: return Vec2(-x.y(), x.x());
    }
  };
  if (prob.f) {
    for_each_volume_qpoint(prob.mesh, [&](const Vec2& x, double w) {
      const Vec2 fx = prob.f(x);
      for (int k = 0; k < 3; ++k) scales[k] += w * fx.norm() * rigid(k, x).norm();
    });
  }
  if (prob.g) {
    for (const auto& qp : boundary_quadrature(prob.mesh, prob.partition.neumann_tags, 5)) {
      const Vec2 gx = prob.g(qp.point, qp.normal, qp.tag);
      for (int k = 0; k < 3; ++k) scales[k] += qp.weight * gx.norm() * rigid(k, qp.point).norm();
    }
  }
  bool bad = false;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(defects[k]) > 1e-8 * std::max(scales[k], 1e-30)) bad = true;
  }
  if (bad) {
    throw IncompatibleDataError(
        "solve_neumann: data violate the rigid-mode balance condition int g.v dS = int f.v dx; "
        "defects (force_x, force_y, torque) = (" + std::to_string(defects[0]) + ", " +
            std::to_string(defects[1]) + ", " + std::to_string(defects[2]) + ")",
        {defects[0], defects[1], defects[2]});
  }
  return solve_common(prob, opts);
}

Solution solve_problem(const StokesProblem& prob, const SolverOptions& opts) {
  switch (prob.partition.regime) {
    case Regime::dirichlet: return solve_dirichlet(prob, opts);
    case Regime::neumann: return solve_neumann(prob, opts);
    case Regime::mixed: return solve(prob, opts);
  }
  throw std::logic_error("solve_problem: unreachable");
}

SuperpositionCheck superposition_check(const StokesProblem& prob, const SolverOptions& opts) {
  if (prob.partition.regime != Regime::mixed) {
    throw std::invalid_argument("superposition_check: mixed regime required");
  }
  const StokesProblem pf{prob.mesh, prob.partition, prob.mu, prob.f, nullptr, nullptr};
  const StokesProblem pg{prob.mesh, prob.partition, prob.mu, nullptr, prob.g, nullptr};
  const StokesProblem ph{prob.mesh, prob.partition, prob.mu, nullptr, nullptr, prob.h};

  const Solution sf = solve(pf, opts);
  const Solution sg = solve(pg, opts);
  const Solution sh = solve(ph, opts);
  const Solution all = solve(prob, opts);

  const DofMap dofmap = build_taylor_hood(prob.mesh, prob.partition);
  const SparseMat h1 = velocity_h1_matrix(prob.mesh, dofmap);
  const SparseMat mp = pressure_mass_matrix(prob.mesh, dofmap);

  const Eigen::VectorXd du = all.u - (sf.u + sg.u + sh.u);
  const Eigen::VectorXd dp = all.p - (sf.p + sg.p + sh.p);
  return SuperpositionCheck{quad_norm(h1, du), quad_norm(mp, dp)};
}

}  // namespace stokes
