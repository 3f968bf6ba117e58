#include "mgs/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace mgs {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double analytic_u(double x, double y) {
  return (x * x - x * x * x) * std::sin(3.0 * kPi * y);
}

ProblemLevel make_linear_level(const StencilOp& A, const GridField& f) {
  ProblemLevel lvl;
  lvl.n = f.n();
  lvl.h = A.h;
  lvl.stencil = A;
  lvl.rhs = f;
  lvl.objective = [A, f](const GridField& u) {
    GridField Au = apply_stencil(A, u);
    return 0.5 * u.dot(Au) - f.dot(u);
  };
  lvl.gradient = [A, f](const GridField& u) {
    GridField g = apply_stencil(A, u);
    g.axpy(-1.0, f);
    return g;
  };
  return lvl;
}

ProblemLevel with_linear_correction(const ProblemLevel& level, const GridField& v) {
  if (v.n() != level.n)
    throw std::invalid_argument("with_linear_correction: size mismatch");
  if (level.linear()) {
    GridField rhs = level.rhs;
    rhs.axpy(1.0, v);
    return make_linear_level(*level.stencil, rhs);
  }
  ProblemLevel out = level;
  auto base_obj = level.objective;
  auto base_grad = level.gradient;
  out.objective = [base_obj, v](const GridField& u) {
    return base_obj(u) - v.dot(u);
  };
  out.gradient = [base_grad, v](const GridField& u) {
    GridField g = base_grad(u);
    g.axpy(-1.0, v);
    return g;
  };
  return out;
}

StencilOp rotated_stencil(double epsilon, double phi, double h) {
  if (epsilon <= 0.0) throw std::invalid_argument("rotated_stencil: epsilon must be > 0");
  const double C = std::cos(phi), S = std::sin(phi);
  const double ex = C * C + epsilon * S * S;  // u_xx coefficient
  const double ey = epsilon * C * C + S * S;  // u_yy coefficient
  const double cx = 0.5 * (1.0 - epsilon) * C * S;

  StencilOp op;
  op.h = h;
  op.scale = 1.0 / (h * h);
  // SPD sign convention: A = -L^h.
  op.weight(0, 0) = 2.0 * (1.0 + epsilon);
  op.weight(1, 0) = op.weight(-1, 0) = -ex;
  op.weight(0, 1) = op.weight(0, -1) = -ey;
  op.weight(1, 1) = op.weight(-1, -1) = -cx;
  op.weight(1, -1) = op.weight(-1, 1) = cx;
  return op;
}

StencilOp laplacian_stencil(double h) { return rotated_stencil(1.0, 0.0, h); }

// ---------------------------------------------------------------------------
// Problem I

double exp_source(double x, double y, double gamma) {
  const double u = analytic_u(x, y);
  const double poly = x * x - x * x * x;
  return ((9.0 * kPi * kPi + gamma * std::exp(u)) * poly + 6.0 * x - 2.0) *
         std::sin(3.0 * kPi * y);
}

ExpVariationalProblem ExpVariationalProblem::build(double gamma, int n) {
  ExpVariationalProblem p;
  p.gamma = gamma;
  p.n = n;
  p.h = 1.0 / (n + 1);
  p.f = GridField(n, p.h);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      p.f(i, j) = exp_source((i + 1) * p.h, (j + 1) * p.h, gamma);
  return p;
}

GridField ExpVariationalProblem::analytic_solution() const {
  GridField u(n, h);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u(i, j) = analytic_u((i + 1) * h, (j + 1) * h);
  return u;
}

// Discrete functional: forward-difference Dirichlet energy over all edges
// (zero halo) plus nodal quadrature of the zero-order terms. Boundary nodes
// contribute the constant -gamma with trapezoid weights so the total
// quadrature weight is exactly the unit area; this keeps the functional an
// O(h^2)-consistent approximation without touching the gradient.
double ExpVariationalProblem::objective(const GridField& u) const {
  if (u.n() != n) throw std::invalid_argument("exp objective: size mismatch");
  double dir = 0.0;
  for (int i = -1; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = u.halo(i + 1, j) - u.halo(i, j);
      dir += d * d;
    }
  for (int i = 0; i < n; ++i)
    for (int j = -1; j < n; ++j) {
      const double d = u.halo(i, j + 1) - u.halo(i, j);
      dir += d * d;
    }
  double zero_order = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double ui = u(i, j);
      zero_order += gamma * (ui - 1.0) * std::exp(ui) - f(i, j) * ui;
    }
  const double interior_area = double(n) * n * h * h;
  const double boundary_const = -gamma * (1.0 - interior_area);
  return 0.5 * dir + h * h * zero_order + boundary_const;
}

GridField ExpVariationalProblem::gradient(const GridField& u) const {
  if (u.n() != n) throw std::invalid_argument("exp gradient: size mismatch");
  GridField g(n, h);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double ui = u(i, j);
      const double lap_part = 4.0 * ui - u.halo(i - 1, j) - u.halo(i + 1, j) -
                              u.halo(i, j - 1) - u.halo(i, j + 1);
      g(i, j) = lap_part + h * h * (gamma * ui * std::exp(ui) - f(i, j));
    }
  return g;
}

ProblemLevel ExpVariationalProblem::level() const {
  ProblemLevel lvl;
  lvl.n = n;
  lvl.h = h;
  ExpVariationalProblem self = *this;
  lvl.objective = [self](const GridField& u) { return self.objective(u); };
  lvl.gradient = [self](const GridField& u) { return self.gradient(u); };
  return lvl;
}

// ---------------------------------------------------------------------------
// Problem II (p-Laplacian)

double plap_source(double x, double y, double p, double xi) {
  const double s3 = std::sin(3.0 * kPi * y), c3 = std::cos(3.0 * kPi * y);
  const double q = x * x - x * x * x, qx = 2.0 * x - 3.0 * x * x, qxx = 2.0 - 6.0 * x;
  const double ux = qx * s3;
  const double uy = 3.0 * kPi * q * c3;
  const double uxx = qxx * s3;
  const double uxy = 3.0 * kPi * qx * c3;
  const double uyy = -9.0 * kPi * kPi * q * s3;
  const double s2 = ux * ux + uy * uy + xi * xi;
  const double sp2 = std::pow(s2, 0.5 * (p - 2.0));
  const double sp4 = std::pow(s2, 0.5 * (p - 4.0));
  return -sp2 * (uxx + uyy) -
         (p - 2.0) * sp4 * (ux * ux * uxx + 2.0 * ux * uy * uxy + uy * uy * uyy);
}

PLaplacianProblem PLaplacianProblem::build(double p, double xi, int n) {
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("PLaplacian: p must be in (1,2)");
  if (xi <= 0.0) throw std::invalid_argument("PLaplacian: xi must be > 0");
  PLaplacianProblem prob;
  prob.p = p;
  prob.xi = xi;
  prob.n = n;
  prob.h = 1.0 / (n + 1);
  prob.f = GridField(n, prob.h);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      prob.f(i, j) = plap_source((i + 1) * prob.h, (j + 1) * prob.h, p, xi);
  return prob;
}

GridField PLaplacianProblem::analytic_solution() const {
  GridField u(n, h);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u(i, j) = analytic_u((i + 1) * h, (j + 1) * h);
  return u;
}

// Cell-based discrete functional with forward differences; each of the
// (n+1)^2 cells carries quadrature weight h^2 so the total area is one.
double PLaplacianProblem::objective(const GridField& u) const {
  if (u.n() != n) throw std::invalid_argument("plap objective: size mismatch");
  double grad_term = 0.0;
  for (int i = -1; i < n; ++i)
    for (int j = -1; j < n; ++j) {
      const double ux = (u.halo(i + 1, j) - u.halo(i, j)) / h;
      const double uy = (u.halo(i, j + 1) - u.halo(i, j)) / h;
      grad_term += std::pow(ux * ux + uy * uy + xi * xi, 0.5 * p);
    }
  double fu = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) fu += f(i, j) * u(i, j);
  return h * h * (grad_term - fu);
}

GridField PLaplacianProblem::gradient(const GridField& u) const {
  if (u.n() != n) throw std::invalid_argument("plap gradient: size mismatch");
  GridField g(n, h);
  auto add = [&](int i, int j, double v) {
    if (i >= 0 && j >= 0 && i < n && j < n) g(i, j) += v;
  };
  for (int i = -1; i < n; ++i)
    for (int j = -1; j < n; ++j) {
      const double ux = (u.halo(i + 1, j) - u.halo(i, j)) / h;
      const double uy = (u.halo(i, j + 1) - u.halo(i, j)) / h;
      const double s2 = ux * ux + uy * uy + xi * xi;
      const double w = p * std::pow(s2, 0.5 * p - 1.0);  // d(s^p)/d(s^2) * 2
      // d/du of h^2 * s^p via the chain rule, one cell at a time.
      add(i + 1, j, h * w * ux);
      add(i, j, -h * w * ux - h * w * uy);
      add(i, j + 1, h * w * uy);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) -= h * h * f(i, j);
  return g;
}

ProblemLevel PLaplacianProblem::level() const {
  ProblemLevel lvl;
  lvl.n = n;
  lvl.h = h;
  PLaplacianProblem self = *this;
  lvl.objective = [self](const GridField& u) { return self.objective(u); };
  lvl.gradient = [self](const GridField& u) { return self.gradient(u); };
  return lvl;
}

}  // namespace mgs
