#include "mgs/transfer.hpp"

#include <stdexcept>

namespace mgs {

int coarse_size(int fine_n) {
  if (fine_n < 3 || fine_n % 2 == 0)
    throw std::invalid_argument("coarse_size: fine_n must be odd and >= 3");
  return (fine_n - 1) / 2;
}

GridField restrict_fw(const GridField& fine) {
  const int nc = coarse_size(fine.n());
  GridField coarse(nc, 2.0 * fine.h());
  static const double w[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
  for (int I = 0; I < nc; ++I) {
    for (int J = 0; J < nc; ++J) {
      const int fi = 2 * I + 1, fj = 2 * J + 1;
      double s = 0.0;
      for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
          s += w[a + 1][b + 1] * fine.halo(fi + a, fj + b);
      coarse(I, J) = s / 16.0;
    }
  }
  return coarse;
}

namespace {

// 1D interpolation from nc coarse values (boundary zeros at virtual
// positions -1 and nc) onto 2*nc+1 fine values.
void prolong_line(const double* c, int nc, double* f, ProlongKind kind) {
  auto cv = [&](int k) { return (k < 0 || k >= nc) ? 0.0 : c[k]; };
  const int fn = 2 * nc + 1;
  for (int a = 0; a < fn; ++a) {
    if (a % 2 == 1) {
      f[a] = cv((a - 1) / 2);
      continue;
    }
    // Midpoint between coarse k-1 and k (k = a/2), boundary zeros included.
    const int k = a / 2;
    if (kind == ProlongKind::Bicubic && k >= 1 && k <= nc - 1) {
      f[a] = (-cv(k - 2) + 9.0 * cv(k - 1) + 9.0 * cv(k) - cv(k + 1)) / 16.0;
    } else {
      f[a] = 0.5 * (cv(k - 1) + cv(k));
    }
  }
}

}  // namespace

GridField prolong(const GridField& coarse, int fine_n, ProlongKind kind) {
  const int nc = coarse.n();
  if (fine_n != 2 * nc + 1)
    throw std::invalid_argument("prolong: incompatible sizes");
  GridField fine(fine_n, coarse.h() / 2.0);

  // Interpolate along j for each coarse row, then along i.
  std::vector<double> tmp(size_t(nc) * fine_n, 0.0);  // tmp[I*fine_n + b]
  std::vector<double> line_in(nc), line_out(fine_n);
  for (int I = 0; I < nc; ++I) {
    for (int J = 0; J < nc; ++J) line_in[J] = coarse(I, J);
    prolong_line(line_in.data(), nc, line_out.data(), kind);
    for (int b = 0; b < fine_n; ++b) tmp[size_t(I) * fine_n + b] = line_out[b];
  }
  for (int b = 0; b < fine_n; ++b) {
    for (int I = 0; I < nc; ++I) line_in[I] = tmp[size_t(I) * fine_n + b];
    prolong_line(line_in.data(), nc, line_out.data(), kind);
    for (int a = 0; a < fine_n; ++a) fine(a, b) = line_out[a];
  }
  return fine;
}

}  // namespace mgs
