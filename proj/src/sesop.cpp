#include "mgs/sesop.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <stdexcept>

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

// Minimum-norm solve of the symmetric reduced system with eigenvalue
// truncation at 1e-12 * max (near-collinear directions).
Eigen::VectorXd truncated_solve(const Eigen::MatrixXd& G, const Eigen::VectorXd& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cutoff = 1e-12 * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd t = es.eigenvectors().transpose() * b;
  for (int i = 0; i < t.size(); ++i)
    t[i] = (ev[i] > cutoff) ? t[i] / ev[i] : 0.0;
  return es.eigenvectors() * t;
}

}  // namespace

double estimate_practical_factor(const ConvergenceTrace& trace) {
  const auto& rec = trace.records;
  if (rec.size() < 11)
    throw std::invalid_argument("estimate_practical_factor: need >= 11 records");
  const double last = rec.back().metric;
  const double earlier = rec[rec.size() - 11].metric;
  if (earlier <= 0.0)
    throw std::invalid_argument("estimate_practical_factor: non-positive metric");
  return std::pow(last / earlier, 0.1);
}

Eigen::VectorXd subspace_minimize_quadratic(const ProblemLevel& level, GridField& x,
                                            const SubspaceBasis& basis) {
  if (!level.linear())
    throw std::invalid_argument("subspace_minimize_quadratic: nonlinear level");
  const int m = int(basis.dirs.size());
  if (m == 0) throw std::invalid_argument("subspace_minimize_quadratic: empty basis");
  const StencilOp& A = *level.stencil;
  GridField r = residual(A, x, level.rhs);
  // Normalize the directions so the truncation threshold is meaningful for
  // bases with widely different scales; weights are mapped back at the end.
  std::vector<double> scale(m, 0.0);
  std::vector<GridField> unit;
  unit.reserve(m);
  for (int i = 0; i < m; ++i) {
    scale[i] = basis.dirs[i].norm();
    GridField u = basis.dirs[i];
    if (scale[i] > 0.0) u.scale(1.0 / scale[i]);
    unit.push_back(std::move(u));
  }
  std::vector<GridField> Ad;
  Ad.reserve(m);
  for (const GridField& d : unit) Ad.push_back(apply_stencil(A, d));
  Eigen::MatrixXd G(m, m);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    b[i] = unit[i].dot(r);
    for (int j = 0; j < m; ++j) G(i, j) = unit[i].dot(Ad[j]);
  }
  Eigen::VectorXd alpha = truncated_solve(G, b);
  for (int i = 0; i < m; ++i) {
    x.axpy(alpha[i], unit[i]);
    alpha[i] = scale[i] > 0.0 ? alpha[i] / scale[i] : 0.0;
  }
  return alpha;
}

Eigen::VectorXd subspace_minimize_newton(const ProblemLevel& level, GridField& x,
                                         const SubspaceBasis& basis, int iters) {
  const int m = int(basis.dirs.size());
  if (m == 0) throw std::invalid_argument("subspace_minimize_newton: empty basis");
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
  GridField xc = x;
  double fc = level.objective(xc);
  const double f0 = fc;

  auto reduced_gradient = [&](const GridField& at) {
    GridField g = level.gradient(at);
    Eigen::VectorXd rg(m);
    for (int i = 0; i < m; ++i) rg[i] = basis.dirs[i].dot(g);
    return rg;
  };

  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd rg = reduced_gradient(xc);
    if (rg.norm() < 1e-10) break;

    // Reduced Hessian by forward differences of the reduced gradient.
    Eigen::MatrixXd H(m, m);
    for (int j = 0; j < m; ++j) {
      const double dn = basis.dirs[j].norm();
      if (dn == 0.0) {
        H.col(j).setZero();
        continue;
      }
      const double eps = 1e-6 * (1.0 + xc.norm()) / dn;
      GridField xp = xc;
      xp.axpy(eps, basis.dirs[j]);
      H.col(j) = (reduced_gradient(xp) - rg) / eps;
    }
    Eigen::VectorXd da = -truncated_solve(H, rg);
    double slope = rg.dot(da);
    if (slope >= 0.0) {  // not a descent direction; fall back to gradient
      da = -rg;
      slope = rg.dot(da);
      if (slope >= 0.0) break;
    }
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      GridField trial = xc;
      for (int i = 0; i < m; ++i) trial.axpy(t * da[i], basis.dirs[i]);
      const double ft = level.objective(trial);
      if (ft <= fc + 1e-4 * t * slope) {
        xc = trial;
        fc = ft;
        alpha += t * da;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  if (fc <= f0) {
    x = xc;
    return alpha;
  }
  return Eigen::VectorXd::Zero(m);
}

GridField cgc_direction(const GridField& x_fine, const GridField& coarse_solution,
                        ProlongKind kind) {
  GridField dc = coarse_solution - restrict_fw(x_fine);
  return prolong(dc, x_fine.n(), kind);
}

GridField quasi_newton_minimize(
    const ProblemLevel& level, const GridField& x0, int max_iters, int memory,
    double gtol, const std::function<bool(const GridField&, int)>& on_iter) {
  GridField x = x0;
  GridField g = level.gradient(x);
  double f = level.objective(x);
  std::deque<GridField> s_hist, y_hist;
  std::deque<double> rho_hist;

  for (int it = 0; it < max_iters; ++it) {
    const double gnorm = g.norm();
    if (gnorm <= gtol || gnorm == 0.0) break;

    // Two-loop recursion.
    GridField q = g;
    const int mem = int(s_hist.size());
    std::vector<double> a(mem);
    for (int i = 0; i < mem; ++i) {
      a[i] = rho_hist[i] * s_hist[i].dot(q);
      q.axpy(-a[i], y_hist[i]);
    }
    if (mem > 0) {
      const double yy = y_hist[0].dot(y_hist[0]);
      if (yy > 0.0) q.scale(y_hist[0].dot(s_hist[0]) / yy);
    }
    for (int i = mem - 1; i >= 0; --i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q.axpy(a[i] - beta, s_hist[i]);
    }

    double slope = -g.dot(q);
    if (slope >= 0.0) {  // reset to steepest descent
      q = g;
      slope = -g.dot(g);
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    double t = 1.0;
    GridField xn = x;
    bool ok = false;
    for (int ls = 0; ls < 40; ++ls) {
      xn = x;
      xn.axpy(-t, q);
      if (level.objective(xn) <= f + 1e-4 * t * slope) {
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (!ok) break;

    GridField gn = level.gradient(xn);
    GridField s = xn - x;
    GridField y = gn - g;
    const double ys = y.dot(s);
    if (ys > 1e-12 * y.norm() * s.norm()) {  // curvature skip rule
      s_hist.push_front(std::move(s));
      y_hist.push_front(std::move(y));
      rho_hist.push_front(1.0 / ys);
      while (int(s_hist.size()) > memory) {
        s_hist.pop_back();
        y_hist.pop_back();
        rho_hist.pop_back();
      }
    }
    x = std::move(xn);
    g = std::move(gn);
    f = level.objective(x);
    if (on_iter && !on_iter(x, it + 1)) break;
  }
  return x;
}

namespace {

class SesopSolver {
 public:
  SesopSolver(const Hierarchy& hier, const SolveConfig& cfg)
      : hier_(hier), cfg_(cfg), omegas_(hier.num_levels(), 0.0),
        sd_hints_(hier.num_levels(), 0.0) {
    for (int l = 0; l < hier.num_levels(); ++l)
      if (hier.levels[l].linear())
        omegas_[l] = optimal_jacobi_omega(*hier.levels[l].stencil);
  }

  SolveResult run() {
    const ProblemLevel& top = hier_.finest();
    const auto t0 = Clock::now();
    GridField x = initial_iterate(top, cfg_);
    SolveResult out{x, {}};

    auto record = [&](int k, GridField& xc) {
      const double m = metric(top, xc);
      out.trace.records.push_back({k, m, elapsed(t0)});
      return m;
    };
    double m0 = record(0, x);
    if (m0 <= stop_tol()) {
      out.trace.converged = true;
      out.x = x;
      return out;
    }

    std::deque<GridField> history;
    GridField prev = x;
    for (int k = 1; k <= cfg_.max_iterations; ++k) {
      x = relax(0, top, std::move(x), cfg_.v1);
      GridField g = top.gradient(x);

      SubspaceBasis basis;
      if (cfg_.use_cgc && hier_.num_levels() >= 2) {
        GridField xs = restrict_fw(x);
        const int calls = (1 == hier_.num_levels() - 1) ? 1 : cfg_.cycle_type;
        for (int c = 0; c < calls; ++c) xs = coarse_solve(1, std::move(xs), g);
        basis.dirs.push_back(cgc_direction(x, xs, hier_.prolong_kind));
      }
      if (top.linear())
        basis.dirs.push_back(apply_preconditioner(cfg_.precond, *top.stencil, g));
      else
        basis.dirs.push_back(g);
      for (const GridField& d : history) basis.dirs.push_back(d);
      prune(basis);

      if (top.linear())
        subspace_minimize_quadratic(top, x, basis);
      else
        subspace_minimize_newton(top, x, basis, cfg_.newton_iters);
      x = relax(0, top, std::move(x), cfg_.v2);

      if (cfg_.history > 0) {
        history.push_front(x - prev);
        while (int(history.size()) > cfg_.history) history.pop_back();
      }
      prev = x;

      if (record(k, x) <= stop_tol()) {
        out.trace.converged = true;
        break;
      }
    }
    out.x = std::move(x);
    return out;
  }

 private:
  double stop_tol() const {
    const bool lin = hier_.finest().linear();
    if (lin) return cfg_.residual_tol;
    return cfg_.fstar ? cfg_.gap_tol : cfg_.residual_tol;
  }

  // Residual norm for linear problems; objective gap (or gradient norm when
  // no reference value is known) for nonlinear ones.
  double metric(const ProblemLevel& top, const GridField& x) const {
    if (top.linear()) return norm_fro(residual(*top.stencil, x, top.rhs));
    if (cfg_.fstar) return top.objective(x) - *cfg_.fstar;
    return top.gradient(x).norm();
  }

  static void prune(SubspaceBasis& basis) {
    std::vector<GridField> kept;
    for (GridField& d : basis.dirs)
      if (d.norm() > 0.0) kept.push_back(std::move(d));
    basis.dirs = std::move(kept);
  }

  GridField relax(int l, const ProblemLevel& prob, GridField x, int sweeps) {
    for (int s = 0; s < sweeps; ++s) {
      if (prob.linear())
        x = jacobi_sweep(*prob.stencil, x, prob.rhs, omegas_[l]);
      else
        x = sd_sweep(prob, x, sd_hints_[l]);
    }
    return x;
  }

  // Solves the corrected problem on level l starting from x; parent_g is the
  // corrected gradient of level l-1 at its build point.
  GridField coarse_solve(int l, GridField x, const GridField& parent_g) {
    const ProblemLevel& base = hier_.levels[l];
    const int L = hier_.num_levels();
    if (l == L - 1) {
      GridField v = base.gradient(x);
      v.axpy(-1.0, restrict_fw(parent_g));
      if (base.linear()) {
        GridField rhs = base.rhs + v;
        return hier_.solve_linear_level(l, rhs);
      }
      return quasi_newton_minimize(with_linear_correction(base, v), x, 10, 10);
    }

    // The correction term is built at the incoming point, before
    // pre-relaxation, so the relaxation sweeps act on the corrected
    // objective (see README note on the ordering).
    GridField v = base.gradient(x);
    v.axpy(-1.0, restrict_fw(parent_g));
    ProblemLevel sigma = with_linear_correction(base, v);
    x = relax(l, sigma, std::move(x), cfg_.v1);
    GridField g = sigma.gradient(x);

    SubspaceBasis basis;
    GridField xs = restrict_fw(x);
    const int calls = (l + 1 == L - 1) ? 1 : cfg_.cycle_type;
    for (int c = 0; c < calls; ++c) xs = coarse_solve(l + 1, std::move(xs), g);
    basis.dirs.push_back(cgc_direction(x, xs, hier_.prolong_kind));
    basis.dirs.push_back(g);
    prune(basis);

    if (sigma.linear())
      subspace_minimize_quadratic(sigma, x, basis);
    else
      subspace_minimize_newton(sigma, x, basis, cfg_.newton_iters);
    return relax(l, sigma, std::move(x), cfg_.v2);
  }

  const Hierarchy& hier_;
  const SolveConfig& cfg_;
  std::vector<double> omegas_;
  std::vector<double> sd_hints_;
};

}  // namespace

SolveResult sesop_solve(const Hierarchy& hier, const SolveConfig& cfg) {
  if (cfg.coeff_mode != CoefficientMode::SubspaceMin) return fixed_step_solve(hier, cfg);
  return SesopSolver(hier, cfg).run();
}

SolveResult fixed_step_solve(const Hierarchy& hier, const SolveConfig& cfg) {
  const ProblemLevel& top = hier.finest();
  if (!top.linear())
    throw std::invalid_argument("fixed_step_solve: linear problems only");
  if (hier.num_levels() < 2 && cfg.fixed.c3() != 0.0)
    throw std::invalid_argument("fixed_step_solve: CGC term needs a coarse level");
  const StencilOp& A = *top.stencil;
  const double c1 = cfg.fixed.c1, c2 = cfg.fixed.c2(), c3 = cfg.fixed.c3();

  const auto t0 = Clock::now();
  GridField x = initial_iterate(top, cfg);
  GridField xprev = x;
  SolveResult out{x, {}};

  GridField r = residual(A, x, top.rhs);
  out.trace.records.push_back({0, norm_fro(r), elapsed(t0)});

  for (int k = 1; k <= cfg.max_iterations; ++k) {
    GridField step = apply_preconditioner(cfg.precond, A, r);
    step.scale(c2);
    if (c3 != 0.0) {
      GridField e = hier.solve_linear_level(1, restrict_fw(r));
      step.axpy(c3, prolong(e, top.n, hier.prolong_kind));
    }
    GridField xn = x;
    xn.axpy(c1, x - xprev);
    xn.axpy(1.0, step);
    xprev = std::move(x);
    x = std::move(xn);

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

}  // namespace mgs
