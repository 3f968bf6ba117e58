#pragma once

#include "mgs/grid.hpp"
#include "mgs/problems.hpp"

namespace mgs {

enum class PreconditionerKind { Identity, JacobiDiagonalInverse, SymmetricGaussSeidel };

// One damped Jacobi sweep: u + omega * D^{-1} (f - A u).
GridField jacobi_sweep(const StencilOp& op, const GridField& u,
                       const GridField& f, double omega);

// Damping factor minimizing the LFA smoothing factor
// max over T^high of |1 - omega * symbol(theta)/center|; requires the
// diagonally scaled symbol to be of one sign over T^high.
// Equals 2/(s_min + s_max) for the sampled extrema of symbol/center.
double optimal_jacobi_omega(const StencilOp& op, int m = 64);

// Steepest descent step: Cauchy trial step from the directional curvature
// along the gradient, then Armijo backtracking. `step_hint` is updated to the
// accepted step and used as a fallback scale when the curvature probe fails.
GridField sd_sweep(const ProblemLevel& level, const GridField& u, double& step_hint);

// Phi * g for the chosen SPD preconditioner.
GridField apply_preconditioner(PreconditionerKind kind, const StencilOp& op,
                               const GridField& g);

}  // namespace mgs
