#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "mgs/problems.hpp"
#include "mgs/transfer.hpp"

namespace mgs {

enum class CoarseMode { Rediscretize, Galerkin };

// Ladder of levels from finest (index 0) to coarsest.
// Immutable after build; the coarsest linear factorization is cached lazily.
struct Hierarchy {
  std::vector<ProblemLevel> levels;
  ProlongKind prolong_kind = ProlongKind::Bilinear;
  CoarseMode coarse_mode = CoarseMode::Rediscretize;

  int num_levels() const { return int(levels.size()); }
  const ProblemLevel& finest() const { return levels.front(); }
  const ProblemLevel& coarsest() const { return levels.back(); }

  // Solves A_coarsest x = b exactly (linear hierarchies only).
  GridField solve_coarsest_linear(const GridField& b) const;

  // Exact solve on an arbitrary linear level (dense, cached); used for the
  // two-grid coarse problem.
  GridField solve_linear_level(int level, const GridField& b) const;

 private:
  struct Cache {
    std::vector<std::unique_ptr<Eigen::LLT<Eigen::MatrixXd>>> llt;
  };
  mutable Cache cache_;
  const Eigen::LLT<Eigen::MatrixXd>& factorization(int level) const;
};

// Linear hierarchy for the rotated anisotropic problem: stencils
// rediscretized per level (or Galerkin-corrected dense checks are done via
// mgs/dense.hpp); the rhs lives on the finest level only.
Hierarchy build_linear_hierarchy(double epsilon, double phi, int fine_n,
                                 int coarsest_n, const GridField& f,
                                 ProlongKind prolong = ProlongKind::Bilinear);

// Nonlinear ladders: coarse functionals are rediscretizations of the
// continuous functional at mesh 2h (sources resampled per level).
Hierarchy build_exp_hierarchy(double gamma, int fine_n, int coarsest_n);
Hierarchy build_plap_hierarchy(double p, double xi, int fine_n, int coarsest_n);

// Number of levels implied by fine_n -> coarsest_n halving; throws if the
// ladder is not factor-2 compatible.
int ladder_depth(int fine_n, int coarsest_n);

}  // namespace mgs
