#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mgs/hierarchy.hpp"
#include "mgs/relaxation.hpp"
#include "mgs/tg_analysis.hpp"

namespace mgs {

struct TraceRecord {
  int iter = 0;
  double metric = 0.0;  // residual norm (linear) or objective gap (nonlinear)
  double seconds = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;
  bool converged = false;
};

// 10th root of the ratio between the last metric and the metric 10
// iterations earlier; needs at least 11 records.
double estimate_practical_factor(const ConvergenceTrace& trace);

enum class CoefficientMode { SubspaceMin, FixedOrdinary, FixedOptimized };

struct SolveConfig {
  int history = 1;  // Pi, number of retained iterate differences
  bool use_cgc = true;
  int v1 = 0, v2 = 0;
  int cycle_type = 1;  // 1 = V, 2 = W
  PreconditionerKind precond = PreconditionerKind::JacobiDiagonalInverse;
  CoefficientMode coeff_mode = CoefficientMode::SubspaceMin;
  FixedCoefficients fixed;  // used by the Fixed* modes
  double residual_tol = 1e-8;
  double gap_tol = 0.0;          // nonlinear stop: objective - *fstar <= gap_tol
  std::optional<double> fstar;   // reference objective for the gap metric
  int max_iterations = 20000;
  int newton_iters = 10;  // subspace minimization steps on nonlinear levels
  std::uint64_t seed = 0;
  bool zero_init = false;  // default: uniform random in [0,1)
};

struct SolveResult {
  GridField x;
  ConvergenceTrace trace;
};

// Ordered subspace directions: [CGC (optional), preconditioned gradient,
// history differences]. Zero-norm entries are pruned before minimization.
struct SubspaceBasis {
  std::vector<GridField> dirs;
};

// Exact minimization of the quadratic level objective over x + span(basis):
// solves (B'AB) a = B'r with eigenvalue truncation at 1e-12 * max for
// near-collinear bases. Returns the weights; x is updated in place.
Eigen::VectorXd subspace_minimize_quadratic(const ProblemLevel& level, GridField& x,
                                            const SubspaceBasis& basis);

// Damped Newton on the reduced function g(a) = F(x + B a); the reduced
// Hessian comes from finite differences of reduced gradients. Never
// increases the objective (falls back to a = 0).
Eigen::VectorXd subspace_minimize_newton(const ProblemLevel& level, GridField& x,
                                         const SubspaceBasis& basis, int iters);

// Prolongated coarse correction P (x_coarse_solution - restrict(x_fine)).
GridField cgc_direction(const GridField& x_fine, const GridField& coarse_solution,
                        ProlongKind kind);

// L-BFGS with Armijo backtracking; used for the nonlinear coarsest level
// and as the quasi-Newton baseline. The optional callback sees each accepted
// iterate and may return false to stop early.
GridField quasi_newton_minimize(
    const ProblemLevel& level, const GridField& x0, int max_iters,
    int memory = 10, double gtol = 0.0,
    const std::function<bool(const GridField&, int)>& on_iter = {});

// Subspace-accelerated multigrid solve (two-grid when the hierarchy has two
// levels). Fixed* coefficient modes run the three-term fixed-stepsize
// recurrence instead of subspace minimization (linear problems only).
SolveResult sesop_solve(const Hierarchy& hier, const SolveConfig& cfg);

// The fixed-stepsize recurrence with exact two-level coarse solves,
// x_k = x_{k-1} + c1 (x_{k-1} - x_{k-2}) + c2 Phi r + c3 P A_H^{-1} R r.
SolveResult fixed_step_solve(const Hierarchy& hier, const SolveConfig& cfg);

}  // namespace mgs
