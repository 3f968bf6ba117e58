#pragma once

#include <Eigen/Dense>

#include "mgs/grid.hpp"
#include "mgs/transfer.hpp"

namespace mgs {

// Dense counterparts of the grid kernels, used as oracles and for small
// exact solves. All of them honor the row-major flattening of GridField.

Eigen::VectorXd flatten(const GridField& g);
GridField unflatten(const Eigen::VectorXd& v, int n, double h);

// The n^2 x n^2 matrix A with A*flatten(u) == flatten(apply_stencil(op,u)).
// Guarded to n^2 <= 4096 by default.
Eigen::MatrixXd assemble_dense(const StencilOp& op, int n, int guard = 4096);

// Dense full-weighting restriction: coarse_n^2 x fine_n^2.
Eigen::MatrixXd restriction_matrix(int fine_n);

// Dense prolongation: fine_n^2 x coarse_n^2.
Eigen::MatrixXd prolongation_matrix(int fine_n, ProlongKind kind);

// Galerkin coarse matrix R * A * P.
Eigen::MatrixXd galerkin_coarse_dense(const Eigen::MatrixXd& A,
                                      int fine_n, ProlongKind kind);

}  // namespace mgs
