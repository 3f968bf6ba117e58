#pragma once

#include <functional>
#include <optional>

#include "mgs/grid.hpp"

namespace mgs {

// One level of a (possibly corrected) optimization problem. Linear levels
// carry the SPD stencil A and right-hand side, so objective(u) is the
// quadratic 1/2 u'Au - rhs'u and gradient(u) = A*u - rhs. Nonlinear levels
// carry objective/gradient closures only.
struct ProblemLevel {
  int n = 0;
  double h = 0.0;
  std::optional<StencilOp> stencil;  // SPD operator, linear problems only
  GridField rhs;                     // linear rhs (f on the fine level, v below)
  std::function<double(const GridField&)> objective;
  std::function<GridField(const GridField&)> gradient;

  bool linear() const { return stencil.has_value(); }
};

// Makes a linear quadratic level for stencil A and right-hand side f.
ProblemLevel make_linear_level(const StencilOp& A, const GridField& f);

// sigma(x) = level.objective(x) - v'x; gradients shift accordingly. For
// linear levels the rhs simply becomes rhs + v.
ProblemLevel with_linear_correction(const ProblemLevel& level, const GridField& v);

// Rotated anisotropic diffusion, SPD sign convention: the discrete operator
// is the negation of the L^h stencil so the induced matrix is SPD for
// epsilon > 0.
StencilOp rotated_stencil(double epsilon, double phi, double h);

// Five-point Laplacian (rotated stencil at epsilon=1, phi=0).
StencilOp laplacian_stencil(double h);

// --- Nonlinear problem I: F(u) = int 1/2|grad u|^2 + gamma(u e^u - e^u) - f u.
struct ExpVariationalProblem {
  double gamma = 10.0;
  int n = 0;
  double h = 0.0;
  GridField f;  // source sampled at interior points

  static ExpVariationalProblem build(double gamma, int n);
  double objective(const GridField& u) const;
  GridField gradient(const GridField& u) const;  // h^2(-lap u + gamma u e^u - f)
  GridField analytic_solution() const;           // (x^2-x^3) sin(3 pi y)
  ProblemLevel level() const;
};

// Closed-form source for problem I.
double exp_source(double x, double y, double gamma);

// --- Nonlinear problem II: F(u) = int ||grad u + xi||^p - f u, p in (1,2).
// The regularizer enters under the root: s = sqrt(ux^2 + uy^2 + xi^2).
struct PLaplacianProblem {
  double p = 1.5;
  double xi = 1e-4;
  int n = 0;
  double h = 0.0;
  GridField f;

  static PLaplacianProblem build(double p, double xi, int n);
  double objective(const GridField& u) const;
  GridField gradient(const GridField& u) const;
  GridField analytic_solution() const;
  ProblemLevel level() const;
};

// Source manufactured from u* = (x^2-x^3) sin(3 pi y) via the p-Laplacian PDE.
double plap_source(double x, double y, double p, double xi);

double analytic_u(double x, double y);

}  // namespace mgs
