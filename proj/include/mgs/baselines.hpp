#pragma once

#include "mgs/sesop.hpp"

namespace mgs {

// Comparison solvers. All share SolveConfig/SolveResult with the subspace
// solver so traces are directly comparable.

// Per iteration: one optimally damped Jacobi sweep followed by the exact
// two-level coarse-grid correction.
SolveResult classical_tg_solve(const Hierarchy& hier, const SolveConfig& cfg);

// One linear correction-scheme V-cycle (v1 pre-, v2 post-sweeps of damped
// Jacobi, exact coarsest solve) applied to the residual r; returns the
// approximate solution of A e = r. A fixed linear operation.
GridField mg_vcycle_apply(const Hierarchy& hier, const GridField& r,
                          int v1, int v2);

// Stationary iteration x += V-cycle(f - A x).
SolveResult classical_mg_solve(const Hierarchy& hier, const SolveConfig& cfg);

SolveResult cg_solve(const ProblemLevel& level, const SolveConfig& cfg);

// CG preconditioned by one V(v1,v2) cycle of classical MG.
SolveResult pcg_mg_solve(const Hierarchy& hier, const SolveConfig& cfg);

// Gradient methods with Armijo backtracking.
SolveResult sd_solve(const ProblemLevel& level, const SolveConfig& cfg);
SolveResult nesterov_solve(const ProblemLevel& level, const SolveConfig& cfg);
SolveResult lbfgs_solve(const ProblemLevel& level, const SolveConfig& cfg,
                        int memory = 10);

// Nonlinear multigrid baseline: steepest-descent relaxation and a
// golden-section line search along the coarse-grid correction.
SolveResult nonlinear_mg_solve(const Hierarchy& hier, const SolveConfig& cfg);

}  // namespace mgs
