#pragma once

#include "mgs/grid.hpp"

namespace mgs {

// Inter-grid transfers with vertex-centered factor-2 coarsening: coarse
// point I sits at fine interior index 2I+1, so fine_n = 2*coarse_n + 1
// (interior counts, n = 2^k - 1 per level).

enum class ProlongKind { Bilinear, Bicubic };

struct TransferPair {
  ProlongKind prolong_kind = ProlongKind::Bilinear;
};

// Throws if fine_n is not of the form 2*c+1.
int coarse_size(int fine_n);

// Full weighting (1/16)[1 2 1; 2 4 2; 1 2 1] sampled at coarse points.
GridField restrict_fw(const GridField& fine);

// Bilinear or bicubic interpolation with zero Dirichlet boundary. Bicubic
// uses the 1D weights (-1/16, 9/16, 9/16, -1/16); boundary values count as
// known zeros, with a linear fallback in the outermost cells where the
// four-point support would leave the domain.
GridField prolong(const GridField& coarse, int fine_n, ProlongKind kind);

}  // namespace mgs
