#include "mgs/relaxation.hpp"

#include <cmath>
#include <stdexcept>

namespace mgs {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Weight-only symbol (scale excluded): sum_k w_k e^{i theta.k}. Real for the
// 180-degree-symmetric stencils used here.
double weight_symbol(const StencilOp& op, double t1, double t2) {
  double s = 0.0;
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj)
      s += op.weight(di, dj) * std::cos(t1 * di + t2 * dj);
  return s;
}
}  // namespace

GridField jacobi_sweep(const StencilOp& op, const GridField& u,
                       const GridField& f, double omega) {
  if (omega <= 0.0 || omega > 1.0)
    throw std::invalid_argument("jacobi_sweep: omega must be in (0,1]");
  const double d = op.scale * op.center();
  if (d == 0.0) throw std::invalid_argument("jacobi_sweep: zero diagonal");
  GridField r = residual(op, u, f);
  GridField out = u;
  out.axpy(omega / d, r);
  return out;
}

double optimal_jacobi_omega(const StencilOp& op, int m) {
  const double d = op.center();
  if (d == 0.0) throw std::invalid_argument("optimal_jacobi_omega: zero diagonal");
  double smin = 1e300, smax = -1e300;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const double t1 = -kPi + 2.0 * kPi * a / m;
      const double t2 = -kPi + 2.0 * kPi * b / m;
      const bool low = (t1 >= -kPi / 2 && t1 < kPi / 2 && t2 >= -kPi / 2 && t2 < kPi / 2);
      if (low) continue;
      const double s = weight_symbol(op, t1, t2) / d;
      smin = std::min(smin, s);
      smax = std::max(smax, s);
    }
  }
  if (smin <= 0.0)
    throw std::invalid_argument("optimal_jacobi_omega: sign-indefinite symbol");
  return 2.0 / (smin + smax);
}

GridField sd_sweep(const ProblemLevel& level, const GridField& u, double& step_hint) {
  GridField g = level.gradient(u);
  const double gnorm2 = g.dot(g);
  if (gnorm2 == 0.0) return u;
  const double f0 = level.objective(u);
  // Cauchy trial step from the directional curvature along g; an initial
  // step on the scale of the smooth modes would amplify high-frequency
  // error and defeat the smoothing role of this sweep.
  const double eps = 1e-7 * (1.0 + u.norm()) / std::sqrt(gnorm2);
  GridField up = u;
  up.axpy(eps, g);
  GridField gp = level.gradient(up);
  gp.axpy(-1.0, g);
  const double curvature = gp.dot(g) / eps;
  double t = curvature > 0.0 ? gnorm2 / curvature
                             : (step_hint > 0.0 ? 2.0 * step_hint : 1.0);
  constexpr double armijo_c = 1e-4;
  for (int k = 0; k < 60; ++k) {
    GridField trial = u;
    trial.axpy(-t, g);
    if (level.objective(trial) <= f0 - armijo_c * t * gnorm2) {
      step_hint = t;
      return trial;
    }
    t *= 0.5;
  }
  throw std::runtime_error("sd_sweep: line search failed (non-descent gradient?)");
}

GridField apply_preconditioner(PreconditionerKind kind, const StencilOp& op,
                               const GridField& g) {
  switch (kind) {
    case PreconditionerKind::Identity:
      return g;
    case PreconditionerKind::JacobiDiagonalInverse: {
      GridField out = g;
      out.scale(1.0 / (op.scale * op.center()));
      return out;
    }
    case PreconditionerKind::SymmetricGaussSeidel: {
      // M^{-1} g with M = (D+L) D^{-1} (D+U) in lexicographic order.
      const int n = g.n();
      const double d = op.scale * op.center();
      GridField y(n, g.h());
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double s = g(i, j);
          for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
              if (di * n + dj >= 0) continue;  // strictly lower offsets
              s -= op.scale * op.weight(di, dj) * y.halo(i + di, j + dj);
            }
          y(i, j) = s / d;
        }
      }
      GridField z(n, g.h());
      for (int i = n - 1; i >= 0; --i) {
        for (int j = n - 1; j >= 0; --j) {
          double s = d * y(i, j);
          for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
              if (di * n + dj <= 0) continue;  // strictly upper offsets
              s -= op.scale * op.weight(di, dj) * z.halo(i + di, j + dj);
            }
          z(i, j) = s / d;
        }
      }
      return z;
    }
  }
  throw std::logic_error("apply_preconditioner: unknown kind");
}

}  // namespace mgs
