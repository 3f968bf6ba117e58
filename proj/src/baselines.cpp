#include "mgs/baselines.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mgs/dense.hpp"
#include "mgs/transfer.hpp"

namespace mgs {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

GridField initial_iterate(const ProblemLevel& top, const SolveConfig& cfg) {
  if (cfg.zero_init) return GridField(top.n, top.h);
  return GridField::random(top.n, top.h, cfg.seed);
}

// Shared driver for linear stationary methods: `step` maps the current
// residual to an update added to x.
template <typename StepFn>
SolveResult stationary_solve(const ProblemLevel& top, const SolveConfig& cfg,
                             StepFn&& step) {
  const StencilOp& A = *top.stencil;
  const auto t0 = Clock::now();
  GridField x = initial_iterate(top, cfg);
  SolveResult out{x, {}};
  GridField r = residual(A, x, top.rhs);
  out.trace.records.push_back({0, norm_fro(r), elapsed(t0)});
  for (int k = 1; k <= cfg.max_iterations; ++k) {
    step(x, r);
    r = residual(A, x, top.rhs);
    const double rn = norm_fro(r);
    out.trace.records.push_back({k, rn, elapsed(t0)});
    if (rn <= cfg.residual_tol) {
      out.trace.converged = true;
      break;
    }
  }
  out.x = std::move(x);
  return out;
}

double golden_section(const std::function<double(double)>& f, double a, double b,
                      double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Recursive correction-scheme cycle for A e = r on level l.
GridField mg_cycle_level(const Hierarchy& hier, int l, const GridField& r,
                         const std::vector<double>& omegas, int v1, int v2) {
  const ProblemLevel& lvl = hier.levels[l];
  if (l == hier.num_levels() - 1) return hier.solve_linear_level(l, r);
  GridField e(lvl.n, lvl.h);
  for (int s = 0; s < v1; ++s) e = jacobi_sweep(*lvl.stencil, e, r, omegas[l]);
  GridField rc = restrict_fw(residual(*lvl.stencil, e, r));
  GridField ec = mg_cycle_level(hier, l + 1, rc, omegas, v1, v2);
  e.axpy(1.0, prolong(ec, lvl.n, hier.prolong_kind));
  for (int s = 0; s < v2; ++s) e = jacobi_sweep(*lvl.stencil, e, r, omegas[l]);
  return e;
}

std::vector<double> level_omegas(const Hierarchy& hier) {
  std::vector<double> omegas(hier.num_levels(), 0.0);
  for (int l = 0; l < hier.num_levels(); ++l)
    if (hier.levels[l].linear())
      omegas[l] = optimal_jacobi_omega(*hier.levels[l].stencil);
  return omegas;
}

// Shared driver for the nonlinear first-order methods.
template <typename IterFn>
SolveResult descent_solve(const ProblemLevel& top, const SolveConfig& cfg,
                          IterFn&& iterate) {
  const auto t0 = Clock::now();
  GridField x = initial_iterate(top, cfg);
  SolveResult out{x, {}};
  auto metric = [&](const GridField& u) {
    if (cfg.fstar) return top.objective(u) - *cfg.fstar;
    return top.gradient(u).norm();
  };
  const double tol = cfg.fstar ? cfg.gap_tol : cfg.residual_tol;
  double m = metric(x);
  out.trace.records.push_back({0, m, elapsed(t0)});
  for (int k = 1; k <= cfg.max_iterations && m > tol; ++k) {
    iterate(x, k);
    m = metric(x);
    out.trace.records.push_back({k, m, elapsed(t0)});
    if (m <= tol) out.trace.converged = true;
  }
  out.x = std::move(x);
  return out;
}

}  // namespace

SolveResult classical_tg_solve(const Hierarchy& hier, const SolveConfig& cfg) {
  const ProblemLevel& top = hier.finest();
  if (!top.linear() || hier.num_levels() < 2)
    throw std::invalid_argument("classical_tg_solve: linear 2+ level hierarchy required");
  const StencilOp& A = *top.stencil;
  const double omega = optimal_jacobi_omega(A);
  // Galerkin coarse operator R A P for the exact coarse-grid correction.
  const Eigen::MatrixXd A_dense = assemble_dense(A, top.n, top.n * top.n);
  const Eigen::MatrixXd AH =
      galerkin_coarse_dense(A_dense, top.n, hier.prolong_kind);
  const Eigen::LLT<Eigen::MatrixXd> llt(AH);
  const ProblemLevel& coarse = hier.levels[1];
  return stationary_solve(top, cfg, [&, llt](GridField& x, const GridField&) {
    x = jacobi_sweep(A, x, top.rhs, omega);
    GridField r = residual(A, x, top.rhs);
    Eigen::VectorXd rc = flatten(restrict_fw(r));
    GridField e = unflatten(llt.solve(rc), coarse.n, coarse.h);
    x.axpy(1.0, prolong(e, top.n, hier.prolong_kind));
  });
}

GridField mg_vcycle_apply(const Hierarchy& hier, const GridField& r, int v1, int v2) {
  return mg_cycle_level(hier, 0, r, level_omegas(hier), v1, v2);
}

SolveResult classical_mg_solve(const Hierarchy& hier, const SolveConfig& cfg) {
  const ProblemLevel& top = hier.finest();
  if (!top.linear())
    throw std::invalid_argument("classical_mg_solve: linear hierarchy required");
  auto omegas = level_omegas(hier);
  return stationary_solve(top, cfg, [&](GridField& x, const GridField& r) {
    x.axpy(1.0, mg_cycle_level(hier, 0, r, omegas, cfg.v1, cfg.v2));
  });
}

SolveResult cg_solve(const ProblemLevel& level, const SolveConfig& cfg) {
  if (!level.linear()) throw std::invalid_argument("cg_solve: linear problem required");
  const StencilOp& A = *level.stencil;
  const auto t0 = Clock::now();
  GridField x = initial_iterate(level, cfg);
  SolveResult out{x, {}};
  GridField r = residual(A, x, level.rhs);
  GridField p = r;
  double rr = r.dot(r);
  out.trace.records.push_back({0, std::sqrt(rr), elapsed(t0)});
  for (int k = 1; k <= cfg.max_iterations; ++k) {
    GridField Ap = apply_stencil(A, p);
    const double pAp = p.dot(Ap);
    if (pAp <= 0.0) throw std::runtime_error("cg_solve: operator not SPD");
    const double alpha = rr / pAp;
    x.axpy(alpha, p);
    r.axpy(-alpha, Ap);
    const double rr_new = r.dot(r);
    out.trace.records.push_back({k, std::sqrt(rr_new), elapsed(t0)});
    if (std::sqrt(rr_new) <= cfg.residual_tol) {
      out.trace.converged = true;
      break;
    }
    p.scale(rr_new / rr);
    p.axpy(1.0, r);
    rr = rr_new;
  }
  out.x = std::move(x);
  return out;
}

SolveResult pcg_mg_solve(const Hierarchy& hier, const SolveConfig& cfg) {
  const ProblemLevel& top = hier.finest();
  if (!top.linear()) throw std::invalid_argument("pcg_mg_solve: linear hierarchy required");
  const StencilOp& A = *top.stencil;
  auto omegas = level_omegas(hier);
  auto precond = [&](const GridField& r) {
    return mg_cycle_level(hier, 0, r, omegas, cfg.v1, cfg.v2);
  };

  const auto t0 = Clock::now();
  GridField x = initial_iterate(top, cfg);
  SolveResult out{x, {}};
  GridField r = residual(A, x, top.rhs);
  GridField z = precond(r);
  GridField p = z;
  double rz = r.dot(z);
  out.trace.records.push_back({0, norm_fro(r), elapsed(t0)});
  for (int k = 1; k <= cfg.max_iterations; ++k) {
    GridField Ap = apply_stencil(A, p);
    const double pAp = p.dot(Ap);
    if (pAp <= 0.0) throw std::runtime_error("pcg_mg_solve: operator not SPD");
    const double alpha = rz / pAp;
    x.axpy(alpha, p);
    r.axpy(-alpha, Ap);
    const double rn = norm_fro(r);
    out.trace.records.push_back({k, rn, elapsed(t0)});
    if (rn <= cfg.residual_tol) {
      out.trace.converged = true;
      break;
    }
    GridField zn = precond(r);
    const double rz_new = r.dot(zn);
    const double beta = rz != 0.0 ? rz_new / rz : 0.0;
    p.scale(beta);
    p.axpy(1.0, zn);
    z = std::move(zn);
    rz = rz_new;
  }
  out.x = std::move(x);
  return out;
}

SolveResult sd_solve(const ProblemLevel& level, const SolveConfig& cfg) {
  double hint = 0.0;
  return descent_solve(level, cfg, [&](GridField& x, int) {
    x = sd_sweep(level, x, hint);
  });
}

SolveResult nesterov_solve(const ProblemLevel& level, const SolveConfig& cfg) {
  GridField x_prev;
  double f_prev = 0.0;
  bool have_prev = false;
  int since_restart = 0;
  double hint = 0.0;
  return descent_solve(level, cfg, [&](GridField& x, int) {
    GridField y = x;
    if (have_prev) {
      const double beta = double(since_restart) / double(since_restart + 3);
      GridField mom = x - x_prev;
      y.axpy(beta, mom);
      const double fy = level.objective(y);
      // Restart when the extrapolation leaves the descent corridor; the
      // objective is not globally smooth, so an unchecked momentum step can
      // land where backtracking cannot recover.
      if (!std::isfinite(fy) || fy > f_prev + std::abs(f_prev) + 1.0) {
        y = x;
        since_restart = 0;
      }
    }
    GridField x_old = x;
    x_prev = x_old;
    x = sd_sweep(level, y, hint);
    double f = level.objective(x);
    if (have_prev && f > f_prev) {
      // Adaptive restart: drop the momentum and redo the step as plain
      // gradient descent, which the line search keeps monotone.
      since_restart = 0;
      x = sd_sweep(level, x_old, hint);
      f = level.objective(x);
    } else {
      ++since_restart;
    }
    f_prev = f;
    have_prev = true;
  });
}

SolveResult lbfgs_solve(const ProblemLevel& level, const SolveConfig& cfg, int memory) {
  const auto t0 = Clock::now();
  GridField x0 = initial_iterate(level, cfg);
  SolveResult out{x0, {}};
  auto metric = [&](const GridField& u) {
    if (cfg.fstar) return level.objective(u) - *cfg.fstar;
    return level.gradient(u).norm();
  };
  const double tol = cfg.fstar ? cfg.gap_tol : cfg.residual_tol;
  out.trace.records.push_back({0, metric(x0), elapsed(t0)});
  out.x = quasi_newton_minimize(
      level, x0, cfg.max_iterations, memory, 0.0,
      [&](const GridField& x, int k) {
        const double m = metric(x);
        out.trace.records.push_back({k, m, elapsed(t0)});
        if (m <= tol) {
          out.trace.converged = true;
          return false;
        }
        return true;
      });
  return out;
}

namespace {

// FAS-style nonlinear cycle with SD relaxation; `sigma` is the corrected
// objective on this level.
GridField nonlinear_cycle(const Hierarchy& hier, int l, GridField x,
                          const GridField* parent_g, const SolveConfig& cfg,
                          std::vector<double>& hints) {
  const ProblemLevel& base = hier.levels[l];
  ProblemLevel sigma = base;
  if (parent_g) {
    if (l == hier.num_levels() - 1) {
      GridField v = base.gradient(x);
      v.axpy(-1.0, restrict_fw(*parent_g));
      return quasi_newton_minimize(with_linear_correction(base, v), x, 10, 10);
    }
    GridField v = base.gradient(x);
    v.axpy(-1.0, restrict_fw(*parent_g));
    sigma = with_linear_correction(base, v);
    for (int s = 0; s < cfg.v1; ++s) x = sd_sweep(sigma, x, hints[l]);
  } else {
    for (int s = 0; s < cfg.v1; ++s) x = sd_sweep(base, x, hints[l]);
  }

  GridField g = sigma.gradient(x);
  GridField xc = restrict_fw(x);
  GridField xs = nonlinear_cycle(hier, l + 1, xc, &g, cfg, hints);
  GridField d = cgc_direction(x, xs, hier.prolong_kind);

  const double f0 = sigma.objective(x);
  auto along = [&](double t) {
    GridField trial = x;
    trial.axpy(t, d);
    return sigma.objective(trial);
  };
  // Coarse functionals carry the coarse-grid quadrature weight, so the
  // correction can underestimate the fine error by a constant factor; expand
  // the search interval until the objective stops improving at its midpoint.
  double b = 2.0;
  while (b < 64.0 && along(b) < along(0.5 * b)) b *= 2.0;
  const double t = golden_section(along, 0.0, b, 1e-6);
  if (along(t) <= f0) x.axpy(t, d);

  for (int s = 0; s < cfg.v2; ++s) x = sd_sweep(sigma, x, hints[l]);
  return x;
}

}  // namespace

SolveResult nonlinear_mg_solve(const Hierarchy& hier, const SolveConfig& cfg) {
  const ProblemLevel& top = hier.finest();
  if (hier.num_levels() < 2)
    throw std::invalid_argument("nonlinear_mg_solve: need >= 2 levels");
  std::vector<double> hints(hier.num_levels(), 0.0);
  return descent_solve(top, cfg, [&](GridField& x, int) {
    x = nonlinear_cycle(hier, 0, std::move(x), nullptr, cfg, hints);
  });
}

}  // namespace mgs
