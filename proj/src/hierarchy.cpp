#include "mgs/hierarchy.hpp"

#include <stdexcept>

#include "mgs/dense.hpp"

namespace mgs {

int ladder_depth(int fine_n, int coarsest_n) {
  int n = fine_n, depth = 1;
  while (n > coarsest_n) {
    n = coarse_size(n);
    ++depth;
  }
  if (n != coarsest_n)
    throw std::invalid_argument("ladder_depth: sizes not factor-2 compatible");
  return depth;
}

const Eigen::LLT<Eigen::MatrixXd>& Hierarchy::factorization(int level) const {
  if (cache_.llt.empty()) cache_.llt.resize(levels.size());
  auto& slot = cache_.llt[level];
  if (!slot) {
    const ProblemLevel& lvl = levels[level];
    if (!lvl.linear())
      throw std::logic_error("Hierarchy: exact solve requires a linear level");
    Eigen::MatrixXd A = assemble_dense(*lvl.stencil, lvl.n, 1 << 22);
    slot = std::make_unique<Eigen::LLT<Eigen::MatrixXd>>(A);
    if (slot->info() != Eigen::Success)
      throw std::runtime_error("Hierarchy: coarse factorization failed (not SPD?)");
  }
  return *slot;
}

GridField Hierarchy::solve_linear_level(int level, const GridField& b) const {
  const ProblemLevel& lvl = levels[level];
  Eigen::VectorXd x = factorization(level).solve(flatten(b));
  return unflatten(x, lvl.n, lvl.h);
}

GridField Hierarchy::solve_coarsest_linear(const GridField& b) const {
  return solve_linear_level(num_levels() - 1, b);
}

Hierarchy build_linear_hierarchy(double epsilon, double phi, int fine_n,
                                 int coarsest_n, const GridField& f,
                                 ProlongKind prolong) {
  const int depth = ladder_depth(fine_n, coarsest_n);
  if (depth < 2) throw std::invalid_argument("build_linear_hierarchy: need >= 2 levels");
  if (f.n() != fine_n)
    throw std::invalid_argument("build_linear_hierarchy: rhs size mismatch");

  Hierarchy hier;
  hier.prolong_kind = prolong;
  int n = fine_n;
  double h = 1.0 / (fine_n + 1);
  for (int l = 0; l < depth; ++l) {
    StencilOp A = rotated_stencil(epsilon, phi, h);
    GridField rhs = (l == 0) ? f : GridField(n, h);
    hier.levels.push_back(make_linear_level(A, rhs));
    if (l + 1 < depth) {
      n = coarse_size(n);
      h *= 2.0;
    }
  }
  return hier;
}

Hierarchy build_exp_hierarchy(double gamma, int fine_n, int coarsest_n) {
  const int depth = ladder_depth(fine_n, coarsest_n);
  Hierarchy hier;
  int n = fine_n;
  for (int l = 0; l < depth; ++l) {
    hier.levels.push_back(ExpVariationalProblem::build(gamma, n).level());
    if (l + 1 < depth) n = coarse_size(n);
  }
  return hier;
}

Hierarchy build_plap_hierarchy(double p, double xi, int fine_n, int coarsest_n) {
  const int depth = ladder_depth(fine_n, coarsest_n);
  Hierarchy hier;
  int n = fine_n;
  for (int l = 0; l < depth; ++l) {
    hier.levels.push_back(PLaplacianProblem::build(p, xi, n).level());
    if (l + 1 < depth) n = coarse_size(n);
  }
  return hier;
}

}  // namespace mgs
