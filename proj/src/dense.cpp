#include "mgs/dense.hpp"

#include <stdexcept>

namespace mgs {

Eigen::VectorXd flatten(const GridField& g) {
  Eigen::VectorXd v(g.size());
  for (int k = 0; k < g.size(); ++k) v[k] = g.data()[k];
  return v;
}

GridField unflatten(const Eigen::VectorXd& v, int n, double h) {
  if (v.size() != n * n) throw std::invalid_argument("unflatten: size mismatch");
  GridField g(n, h);
  for (int k = 0; k < n * n; ++k) g.data()[k] = v[k];
  return g;
}

Eigen::MatrixXd assemble_dense(const StencilOp& op, int n, int guard) {
  if (n * n > guard) throw std::invalid_argument("assemble_dense: guard exceeded");
  const int N = n * n;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int row = i * n + j;
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
          A(row, ii * n + jj) += op.scale * op.weight(di, dj);
        }
      }
    }
  }
  return A;
}

Eigen::MatrixXd restriction_matrix(int fine_n) {
  const int nc = coarse_size(fine_n);
  Eigen::MatrixXd R(nc * nc, fine_n * fine_n);
  GridField e(fine_n, 1.0 / (fine_n + 1));
  for (int k = 0; k < fine_n * fine_n; ++k) {
    e.data().assign(e.data().size(), 0.0);
    e.data()[k] = 1.0;
    GridField c = restrict_fw(e);
    for (int m = 0; m < nc * nc; ++m) R(m, k) = c.data()[m];
  }
  return R;
}

Eigen::MatrixXd prolongation_matrix(int fine_n, ProlongKind kind) {
  const int nc = coarse_size(fine_n);
  Eigen::MatrixXd P(fine_n * fine_n, nc * nc);
  GridField e(nc, 2.0 / (fine_n + 1));
  for (int k = 0; k < nc * nc; ++k) {
    e.data().assign(e.data().size(), 0.0);
    e.data()[k] = 1.0;
    GridField f = prolong(e, fine_n, kind);
    for (int m = 0; m < fine_n * fine_n; ++m) P(m, k) = f.data()[m];
  }
  return P;
}

Eigen::MatrixXd galerkin_coarse_dense(const Eigen::MatrixXd& A,
                                      int fine_n, ProlongKind kind) {
  if (A.rows() != fine_n * fine_n || A.cols() != fine_n * fine_n)
    throw std::invalid_argument("galerkin_coarse_dense: size mismatch");
  Eigen::MatrixXd R = restriction_matrix(fine_n);
  Eigen::MatrixXd P = prolongation_matrix(fine_n, kind);
  return R * A * P;
}

}  // namespace mgs
